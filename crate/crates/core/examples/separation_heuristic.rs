//! Runs the three-ordering separation routine at a relaxation point.

use polycut::instance::Point;
use polycut::separation::{separate, SeparationConfig, SeparationState};

fn main() {
    let a = [22.0, 18.0, 21.0, 19.0, 17.0];
    let points = [
        Point::new(vec![1.0, 0.3817, 0.6543, 0.3616, 0.8083], vec![1.0, 0.3817, 0.6543, 0.3616, 0.8083], 6.8705),
        Point::new(vec![1.0, 0.6, 0.0, 0.0, 0.8], vec![1.0, 0.0, 0.0, 0.0, 0.8], 5.7341),
    ];
    let cfg = SeparationConfig::default();
    let mut state = SeparationState::default();
    for p in &points {
        let out = separate(p, &a, 0.0, &cfg, &mut state);
        for c in &out.cuts {
            println!("{:?} via {:?}: violation {:.4}", c.class, c.rule, c.violation);
        }
        println!("counts {:?}, budget used {:?}", out.counts, state.used);
    }
}
