//! Instance validation and the JSON file format.

use polycut::instance::Instance;

fn main() -> polycut::Result<()> {
    let doc = br#"{
        "n": 3,
        "a": [4.0, 2.0, 1.0],
        "c": [1.0, 1.0, 1.0],
        "d": [-2.0, -2.0, -2.0],
        "sigma0": 0.0,
        "omega": 1.645,
        "bounds": [2.0, 1.0, 1.0]
    }"#;
    let inst = Instance::read(doc)?;
    println!("after unit scaling a = {:?}, d = {:?}", inst.a, inst.d);
    print!("{}", String::from_utf8_lossy(&inst.write()));

    let mut bad = inst.clone();
    bad.a[1] = 0.0;
    bad.cardinality = Some(4);
    println!("diagnostics: {:?}", bad.validate());

    match Instance::read(b"") {
        Ok(_) => println!("unexpectedly parsed"),
        Err(e) => println!("empty document: {e}"),
    }
    Ok(())
}
