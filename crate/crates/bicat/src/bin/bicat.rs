fn main() {
    // CLI wired up once the document format lands.
    eprintln!("bicat: command-line surface not built yet");
    std::process::exit(2);
}
