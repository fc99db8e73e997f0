//! Ready-made configurations and tiles used by the CLI and the test suites.

use crate::config::Configuration;
use crate::error::Result;
use crate::lattice::{IntVector, Lattice};
use crate::quadratic::QuadraticReal;
use crate::tiling::ClusterTile;

fn iv(x: &[i64]) -> IntVector {
    IntVector(x.to_vec())
}

/// `0 1 / 1 0` repeated with periods `(2,0)` and `(0,2)`.
pub fn checkerboard() -> Configuration {
    let lattice = Lattice::new(2, vec![iv(&[2, 0]), iv(&[0, 2])]).expect("independent");
    Configuration::periodic(lattice, [(iv(&[1, 0]), 1), (iv(&[0, 1]), 1)]).expect("valid")
}

/// Two skew lines of ones in `Z^3`: `c(i,0,0) = c(0,i,n) = 1`.
pub fn two_lines(n: i64) -> Result<Configuration> {
    let a = Configuration::coset(iv(&[0, 0, 0]), Lattice::span(3, vec![iv(&[1, 0, 0])])?, 1)?;
    let b = Configuration::coset(iv(&[0, 0, n]), Lattice::span(3, vec![iv(&[0, 1, 0])])?, 1)?;
    Configuration::sum(3, vec![(1, a), (1, b)])
}

/// `floor((i+j)a) - floor(ia) - floor(ja)`, valued in `{0,1}` for irrational `a`.
pub fn mechanical_sum(alpha: QuadraticReal) -> Configuration {
    Configuration::sum(
        2,
        vec![
            (1, Configuration::mechanical(iv(&[1, 1]), alpha)),
            (-1, Configuration::mechanical(iv(&[1, 0]), alpha)),
            (-1, Configuration::mechanical(iv(&[0, 1]), alpha)),
        ],
    )
    .expect("same dimension")
}

/// The Sturmian word `floor((i+1)a) - floor(ia)`.
pub fn sturmian(alpha: QuadraticReal) -> Configuration {
    let m = Configuration::mechanical(iv(&[1]), alpha);
    let shifted = Configuration::shift(m.clone(), iv(&[1])).expect("same dimension");
    Configuration::sum(1, vec![(1, shifted), (-1, m)]).expect("same dimension")
}

/// The L-tromino `{(0,0), (1,0), (0,1)}`.
pub fn tromino() -> ClusterTile {
    ClusterTile::new(vec![iv(&[0, 0]), iv(&[1, 0]), iv(&[0, 1])]).expect("nonempty")
}
