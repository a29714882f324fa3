//! Builds one cut of each lifted class and linearizes the conic ones.

use polycut::cuts::{build_lifted_linear, build_mixed_cone, build_subset_cone, gradient_linearize, Cut};
use polycut::instance::Point;
use polycut::polymatroid::Permutation;

fn main() -> polycut::Result<()> {
    let a = [22.0, 18.0, 21.0, 19.0, 17.0];

    let linear = build_lifted_linear(&a, 0.0, &Permutation::from_one_based(&[1, 3, 5, 2, 4], 5)?)?;
    println!("linear  pi {:.4?}\n        alpha {:.4?}", linear.pi, linear.alpha);

    let subset: Cut = build_subset_cone(&a, 0.0, &Permutation::from_one_based(&[1, 5, 2], 5)?)?.into();
    let x = vec![1.0, 0.0, 0.0, 0.0, 0.8];
    let p = Point::new(x.clone(), x, 5.7341);
    println!("subset  violation {:.4}", subset.violation(&p));
    let row = gradient_linearize(&subset, &p)?;
    println!("        gradient row cx {:.4?} cy {:.4?} rhs {:.4}", row.coef_x, row.coef_y, row.rhs);

    let mixed: Cut = build_mixed_cone(&a, 0.0, &Permutation::from_one_based(&[1, 2], 5)?, &[2, 4])?.into();
    let x = [0.8, 0.5, 1.0, 0.0, 1.0];
    println!("mixed   lhs at x = y: {:.4}", mixed.lower_bound(&x, &x));
    Ok(())
}
