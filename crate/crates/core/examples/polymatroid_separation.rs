//! Greedy separation of polymatroid inequalities at a fractional point.

use polycut::polymatroid::{compute_pi, greedy_separate_binary, Permutation};

fn main() -> polycut::Result<()> {
    let a = [22.0, 18.0, 21.0, 19.0, 17.0];
    let x = [1.0, 0.3817, 0.6543, 0.3616, 0.8083];
    let z = 6.8705;

    let fixed = compute_pi(&a, 0.0, &Permutation::from_one_based(&[1, 3, 5, 2, 4], 5)?)?;
    println!("pi for (1,3,5,2,4): {:.4?}", fixed.pi);
    println!("violation: {:.4}", fixed.violation(&x, z));

    match greedy_separate_binary(&a, 0.0, &x, z) {
        Some(cut) => println!("most violated order {:?}, violation {:.4}", cut.perm.as_slice(), cut.violation(&x, z)),
        None => println!("point lies in the hull"),
    }
    Ok(())
}
