fn main() {
    println!("covspec");
}
