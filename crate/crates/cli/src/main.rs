fn main() {
    println!("fgl: not wired up yet");
}
