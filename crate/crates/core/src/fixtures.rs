//! Small generator matrices used throughout the tests and documentation.

use crate::ff::Elem;
use crate::generator::GeneratorMatrix;

fn prime(p: u64, rows: &[&[Elem]]) -> GeneratorMatrix {
    let rows: Vec<Vec<Elem>> = rows.iter().map(|r| r.to_vec()).collect();
    GeneratorMatrix::over_prime(p, &rows).expect("fixture is a valid generator matrix")
}

/// Replication over F_2: object 1 on servers 1, 3, 4 and object 2 on server 2.
pub fn rep_2x4_f2() -> GeneratorMatrix {
    prime(2, &[&[1, 0, 1, 1], &[0, 1, 0, 0]])
}

/// Systematic 3 x 6 matrix over F_3.
pub fn sys_3x6_f3() -> GeneratorMatrix {
    prime(3, &[&[1, 0, 0, 1, 0, 1], &[0, 1, 0, 1, 2, 2], &[0, 0, 1, 1, 1, 1]])
}

/// Systematic MDS 2 x 4 matrix over F_3.
pub fn mds_2x4_f3() -> GeneratorMatrix {
    prime(3, &[&[1, 0, 1, 1], &[0, 1, 1, 2]])
}

/// A 3 x 4 binary matrix whose largest hypercube is strictly smaller than min(λ/k, δ).
pub fn gap_3x4_f2() -> GeneratorMatrix {
    prime(2, &[&[1, 1, 0, 1], &[0, 0, 1, 1], &[0, 0, 0, 1]])
}

/// [I_3 | 1] over F_2.
pub fn parity_3x4_f2() -> GeneratorMatrix {
    prime(2, &[&[1, 0, 0, 1], &[0, 1, 0, 1], &[0, 0, 1, 1]])
}

/// Systematic generator of the binary [7,3] simplex code.
pub fn simplex_3x7_f2() -> GeneratorMatrix {
    prime(
        2,
        &[
            &[1, 0, 0, 1, 1, 0, 1],
            &[0, 1, 0, 1, 0, 1, 1],
            &[0, 0, 1, 0, 1, 1, 1],
        ],
    )
}

/// Non-systematic 3 x 6 matrix over F_3 with one systematic node.
pub fn mixed_3x6_f3() -> GeneratorMatrix {
    prime(3, &[&[0, 1, 1, 2, 1, 2], &[1, 2, 2, 2, 1, 1], &[0, 0, 0, 1, 2, 2]])
}

/// 2 x 8 matrix over F_3 with repeated systematic columns.
pub fn rep_2x8_f3() -> GeneratorMatrix {
    prime(3, &[&[1, 0, 1, 1, 0, 0, 1, 1], &[0, 1, 0, 0, 1, 1, 1, 2]])
}

/// Non-systematic MDS 2 x 4 matrix over F_7 whose max-sum capacity is 2.
pub fn nonsys_2x4_f7() -> GeneratorMatrix {
    prime(7, &[&[2, 1, 3, 4], &[1, 2, 3, 5]])
}

/// Every named fixture above.
pub fn all() -> Vec<GeneratorMatrix> {
    vec![
        rep_2x4_f2(),
        sys_3x6_f3(),
        mds_2x4_f3(),
        gap_3x4_f2(),
        parity_3x4_f2(),
        simplex_3x7_f2(),
        mixed_3x6_f3(),
        rep_2x8_f3(),
        nonsys_2x4_f7(),
    ]
}

/// Name and matrix of every fixture.
pub fn named() -> Vec<(&'static str, GeneratorMatrix)> {
    vec![
        ("rep_2x4_f2", rep_2x4_f2()),
        ("sys_3x6_f3", sys_3x6_f3()),
        ("mds_2x4_f3", mds_2x4_f3()),
        ("gap_3x4_f2", gap_3x4_f2()),
        ("parity_3x4_f2", parity_3x4_f2()),
        ("simplex_3x7_f2", simplex_3x7_f2()),
        ("mixed_3x6_f3", mixed_3x6_f3()),
        ("rep_2x8_f3", rep_2x8_f3()),
        ("nonsys_2x4_f7", nonsys_2x4_f7()),
    ]
}
