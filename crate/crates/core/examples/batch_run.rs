//! Drive the command-line runner in-process on the bundled problem file.

use fluctuation::cli::{run_with, FLUID_CONFIG};

fn main() {
    let path = std::env::temp_dir().join("fluctuation-example.cfg");
    std::fs::write(&path, FLUID_CONFIG).expect("write config");
    let path = path.to_string_lossy().into_owned();

    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(["fluctuation", "compare", &path, "--paths", "20000"], &mut out, &mut err);
    print!("{}", String::from_utf8_lossy(&out));
    eprint!("{}", String::from_utf8_lossy(&err));
    println!("exit code {code}");

    let mut json = Vec::new();
    run_with(["fluctuation", "--json", "passage", &path, "--method", "talbot"], &mut json, &mut err);
    print!("{}", String::from_utf8_lossy(&json));
}
