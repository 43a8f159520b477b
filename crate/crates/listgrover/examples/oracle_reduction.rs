//! Reduces edge constraints to minimum-cost parities of control patterns.
//!
//! An edge (u, v) is satisfied when the two endpoint colors differ. Instead
//! of one multi-controlled gate per differing color pair, the reduction
//! finds a smaller set of control patterns whose parity of matches equals
//! the predicate, which directly lowers the gate cost of the oracle.

use listgrover::cli::format_term_set;
use listgrover::synth::oracle_reduction;

fn main() {
    let pairs: [(&str, Vec<u32>, Vec<u32>); 3] = [
        ("triangle lists {1,2,3} x {1,2,3}", vec![1, 2, 3], vec![1, 2, 3]),
        ("full 2-bit lists {0..3} x {0..3}", vec![0, 1, 2, 3], vec![0, 1, 2, 3]),
        ("uneven widths {0,1} x {0,1,2,3,4}", vec![0, 1], vec![0, 1, 2, 3, 4]),
    ];
    for (label, u, v) in pairs {
        println!("== {label} ==");
        // naive cost: one full-width gate per differing pair
        let width = listgrover::problem::bit_width(&u) + listgrover::problem::bit_width(&v);
        let naive: usize = u
            .iter()
            .flat_map(|a| v.iter().map(move |b| (a, b)))
            .filter(|(a, b)| a != b)
            .count()
            * width;
        println!("naive cost: {naive}");
        print!("{}", format_term_set(&oracle_reduction(&u, &v)));
        println!();
    }
}
