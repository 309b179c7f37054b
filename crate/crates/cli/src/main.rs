fn main() {
    // placeholder while the core crate comes up
}
