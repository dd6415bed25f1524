//! Print the standard example workspace to stdout:
//! `cargo run -p triolex --example gen_workspace > workspace.json`

fn main() {
    let ws = triolex::fixture::standard_workspace();
    println!("{}", serde_json::to_string_pretty(&ws).expect("serializable"));
}
