//! Deterministic pseudo-randomness for test suites. splitmix64 keeps the
//! cases reproducible without pulling in an RNG dependency.

use crate::ring::{rat_int, LaurentPoly, RingMode};
use crate::smith::PolyMatrix;

pub(crate) struct TestRng(pub u64);

impl TestRng {
    pub(crate) fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub(crate) fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }

    pub(crate) fn poly(&mut self, mode: RingMode, max_span: i64) -> LaurentPoly {
        let extra_terms = self.below(3);
        let base = match mode {
            RingMode::Poly => self.below(3) as i64,
            RingMode::Laurent => self.below(5) as i64 - 2,
        };
        let mut parts = Vec::new();
        for _ in 0..=extra_terms {
            let exp = base + self.below(max_span as u64 + 1) as i64;
            let num = self.below(7) as i64 - 3;
            parts.push((exp, rat_int(num)));
        }
        LaurentPoly::from_terms('y', parts)
    }

    pub(crate) fn matrix(
        &mut self,
        rows: usize,
        cols: usize,
        mode: RingMode,
        density_pct: u64,
        max_span: i64,
    ) -> PolyMatrix {
        PolyMatrix::from_fn(rows, cols, |_, _| {
            if self.below(100) < density_pct {
                self.poly(mode, max_span)
            } else {
                LaurentPoly::zero()
            }
        })
    }
}
