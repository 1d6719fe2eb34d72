//! Acceptance suite: one test per contract criterion, each printing a
//! single `ACCEPTANCE <k> ...: PASS/FAIL` line (run with `--nocapture` to
//! see them) and enforcing its time budget.

use std::time::{Duration, Instant};

use ybhom::chain::{boundary, face_left, face_right};
use ybhom::homology::{
    compute_homology, deg3_kernel_dim, h2_expected, pw_conjectured, table_expected,
};
use ybhom::ring::{one_minus_y2, rat_int, LaurentPoly, RingMode};
use ybhom::smith::{kernel_basis, minors_gcd_invariant_factors, snf, PolyMatrix};
use ybhom::tensor::{BasisTuple, TensorVector};
use ybhom::ybop::{Specialization, YBOperator};

fn criterion(idx: usize, name: &str, budget_s: u64, body: impl FnOnce()) {
    let start = Instant::now();
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(body));
    let ms = start.elapsed().as_millis();
    match outcome {
        Ok(()) if start.elapsed() <= Duration::from_secs(budget_s) => {
            println!("ACCEPTANCE {idx} {name}: PASS ({ms} ms, budget {budget_s} s)");
        }
        Ok(()) => {
            println!("ACCEPTANCE {idx} {name}: FAIL (over budget: {ms} ms > {budget_s} s)");
            panic!("criterion {idx} exceeded its time budget");
        }
        Err(cause) => {
            println!("ACCEPTANCE {idx} {name}: FAIL ({ms} ms)");
            std::panic::resume_unwind(cause);
        }
    }
}

fn homflypt(m: usize) -> YBOperator {
    YBOperator::homflypt(m).unwrap()
}

#[test]
fn criterion_1_yang_baxter_equation() {
    criterion(1, "Yang-Baxter equation for R_(m), m=1..5", 10, || {
        for m in 1..=5 {
            let op = homflypt(m);
            let report = op.verify_ybe().unwrap();
            assert!(report.holds(), "YBE fails at m={m}: {:?}", report.failures);
            assert_eq!(report.triples_checked, m * m * m);
            assert!(op.is_column_unital(), "column sums are not 1 at m={m}");
        }
    });
}

#[test]
fn criterion_2_boundary_composition_vanishes() {
    criterion(2, "boundary of boundary is zero", 60, || {
        for m in 1..=4 {
            let op = homflypt(m);
            let mut prev = boundary(&op, 1).unwrap();
            for n in 2..=5 {
                let next = boundary(&op, n).unwrap();
                assert!(
                    prev.composes_to_zero_with(&next),
                    "composition is nonzero at m={m}, degrees {}/{n}",
                    n - 1
                );
                prev = next;
            }
        }
        let op = homflypt(2);
        let mut prev = boundary(&op, 1).unwrap();
        for n in 2..=8 {
            let next = boundary(&op, n).unwrap();
            assert!(
                prev.composes_to_zero_with(&next),
                "composition is nonzero at m=2, degrees {}/{n}",
                n - 1
            );
            prev = next;
        }
    });
}

#[test]
fn criterion_3_degree2_closed_form() {
    criterion(3, "degree-2 homology closed form, m=2..7", 120, || {
        for m in 2..=7 {
            let res = compute_homology(&homflypt(m), "homflypt", 2, RingMode::Poly, None).unwrap();
            let e = h2_expected(m);
            assert_eq!(
                res.summary(),
                Some((e.free, e.y2_classes, e.y4_classes)),
                "wrong decomposition at m={m}"
            );
            // The degree-2 boundary is identically zero, so the kernel is
            // the whole module.
            assert_eq!(res.kernel_dim, m * m);
        }
    });
}

#[test]
fn criterion_4_degree3_table() {
    criterion(4, "degree-3 homology table, m=3..7", 3000, || {
        let small = Instant::now();
        for m in 3..=5 {
            let res = compute_homology(&homflypt(m), "homflypt", 3, RingMode::Poly, None).unwrap();
            let e = table_expected(m, 3).unwrap();
            assert_eq!(
                res.summary(),
                Some((e.free, e.y2_classes, e.y4_classes)),
                "wrong decomposition at m={m}"
            );
        }
        assert!(
            small.elapsed() <= Duration::from_secs(300),
            "m=3..5 exceeded its 5-minute budget"
        );
        let large = Instant::now();
        for m in 6..=7 {
            let res = compute_homology(&homflypt(m), "homflypt", 3, RingMode::Poly, None).unwrap();
            let e = table_expected(m, 3).unwrap();
            assert_eq!(
                res.summary(),
                Some((e.free, e.y2_classes, e.y4_classes)),
                "wrong decomposition at m={m}"
            );
        }
        assert!(
            large.elapsed() <= Duration::from_secs(2700),
            "m=6..7 exceeded its 45-minute budget"
        );
    });
}

#[test]
fn criterion_5_rank2_tower() {
    criterion(5, "rank-2 homology tower, n=2..6", 1800, || {
        let op = homflypt(2);
        for n in 2..=6 {
            let res = compute_homology(&op, "homflypt", n, RingMode::Poly, None).unwrap();
            let e = pw_conjectured(n);
            assert_eq!(
                res.summary(),
                Some((e.free, e.y2_classes, e.y4_classes)),
                "wrong decomposition at n={n}"
            );
        }
    });
}

#[test]
fn criterion_6_degree3_kernel_dimensions() {
    criterion(6, "degree-3 kernel dimensions, m=2..5", 120, || {
        let expected = [6usize, 22, 55, 111];
        for (m, &want) in (2..=5).zip(&expected) {
            assert_eq!(deg3_kernel_dim(m), want);
            let d3 = boundary(&homflypt(m), 3).unwrap();
            let kb = kernel_basis(d3.matrix(), RingMode::Poly).unwrap();
            assert_eq!(kb.dim(), want, "wrong kernel dimension at m={m}");
        }
    });
}

#[test]
fn criterion_7_normalization_counterexample() {
    criterion(7, "column normalization breaks the equation", 30, || {
        let op = YBOperator::kauffman().unwrap();
        assert!(
            op.verify_ybe().unwrap().holds(),
            "YBE must hold symbolically"
        );
        assert!(!op.is_column_unital(), "columns must not already sum to 1");
        let points = [rat_int(2), rat_int(3), rat_int(5)];
        let point = op.first_usable_point(&points).unwrap();
        assert_eq!(
            point,
            Some(rat_int(2)),
            "2 should be the first usable point"
        );
        let normalized = op.column_normalize_at(&rat_int(2)).unwrap();
        assert!(normalized.is_column_unital());
        let report = normalized.verify_ybe().unwrap();
        assert!(
            !report.holds(),
            "normalized operator must fail the equation"
        );
        assert!(!report.failures.is_empty());
    });
}

#[test]
fn criterion_8_jones_correspondence() {
    criterion(8, "normalized Jones matches specialized R_(m)", 10, || {
        for m in 1..=4 {
            let jones = YBOperator::jones(m).unwrap();
            let hf = homflypt(m);
            for qi in [2i64, 3, 5] {
                let q = rat_int(qi);
                let y2v = rat_int(1) / (rat_int(1) + rat_int(1) / q.clone() - q.clone());
                let normalized = jones.column_normalize_at(&q).unwrap();
                let specialized = hf.specialize(&Specialization::VarSquared(y2v)).unwrap();
                assert!(normalized.is_column_unital());
                assert_eq!(
                    normalized.matrix(),
                    specialized.matrix(),
                    "mismatch at m={m}, q={qi}"
                );
            }
        }
    });
}

// ---- criterion 9: property suites ------------------------------------

/// Deterministic splitmix64, reimplemented here so the suite does not
/// share randomness with anything inside the crate.
struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }

    fn poly(&mut self, mode: RingMode) -> LaurentPoly {
        if self.below(2) == 0 {
            return LaurentPoly::zero();
        }
        let terms = 1 + self.below(3);
        let lo: i64 = if mode == RingMode::Laurent { -3 } else { 0 };
        let pairs: Vec<(i64, _)> = (0..terms)
            .map(|_| {
                let exp = lo + self.below(5) as i64;
                let mut coeff = self.below(9) as i64 - 4;
                if coeff == 0 {
                    coeff = 1;
                }
                (exp, rat_int(coeff))
            })
            .collect();
        LaurentPoly::from_terms('y', pairs)
    }

    fn matrix(&mut self, rows: usize, cols: usize, mode: RingMode) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, self.poly(mode));
            }
        }
        m
    }
}

fn one_minus_y4() -> LaurentPoly {
    LaurentPoly::from_terms('y', [(0, rat_int(1)), (4, rat_int(-1))])
}

fn pair(m: usize, a: u8, b: u8) -> TensorVector {
    TensorVector::basis(&BasisTuple::new(m, vec![a, b]).unwrap())
}

/// Reverse a vector's tuples and flip each letter `a -> m + 1 - a`.
fn mirror(v: &TensorVector) -> TensorVector {
    let (m, n) = (v.m(), v.n());
    let mut out = TensorVector::zero(m, n);
    for (idx, coeff) in v.terms() {
        let t = BasisTuple::from_index(m, n, idx).unwrap();
        let letters: Vec<u8> = t.letters().iter().rev().map(|&a| m as u8 + 1 - a).collect();
        out.add_term(BasisTuple::new(m, letters).unwrap().index(), coeff);
    }
    out
}

fn smith_agrees_with_minors_oracle() {
    let mut rng = Rng(0x5eed_ac3e_97a1_0001);
    let mut checked = 0usize;
    while checked < 220 {
        let mode = if checked.is_multiple_of(2) {
            RingMode::Poly
        } else {
            RingMode::Laurent
        };
        let rows = 1 + rng.below(5) as usize;
        let cols = 1 + rng.below(5) as usize;
        let m = rng.matrix(rows, cols, mode);
        let fast = snf(&m, mode, checked.is_multiple_of(4)).unwrap();
        let slow = minors_gcd_invariant_factors(&m, mode).unwrap();
        assert_eq!(fast.invariant_factors, slow, "oracle disagrees on {m:?}");
        for w in fast.invariant_factors.windows(2) {
            assert!(mode.divides(&w[0], &w[1]).unwrap(), "chain broken on {m:?}");
        }
        if let (Some(u), Some(v)) = (&fast.u, &fast.v) {
            let d = PolyMatrix::from_fn(rows, cols, |r, c| {
                if r == c && r < fast.invariant_factors.len() {
                    fast.invariant_factors[r].clone()
                } else {
                    LaurentPoly::zero()
                }
            });
            assert_eq!(u.mul(&m).mul(v), d, "transforms do not diagonalize {m:?}");
        }
        checked += 1;
    }
}

fn degree3_face_values() {
    let op = homflypt(3);
    let (a, b, c) = (1u8, 2, 3);
    let v = TensorVector::basis(&BasisTuple::new(3, vec![a, b, c]).unwrap());
    let y2 = ybhom::ring::y2();
    let y4 = &y2 * &y2;
    let w = one_minus_y2();

    assert_eq!(face_left(&op, &v, 1).unwrap(), pair(3, b, c));
    assert_eq!(face_right(&op, &v, 3).unwrap(), pair(3, a, b));
    assert_eq!(
        face_left(&op, &v, 2).unwrap(),
        pair(3, a, c).scale(&y2).add(&pair(3, b, c).scale(&w))
    );
    assert_eq!(
        face_right(&op, &v, 2).unwrap(),
        pair(3, a, c).scale(&y2).add(&pair(3, a, b).scale(&w))
    );
    assert_eq!(
        face_left(&op, &v, 3).unwrap(),
        pair(3, a, b)
            .scale(&y4)
            .add(&pair(3, c, b).scale(&(&y2 * &w)))
            .add(&pair(3, a, c).scale(&(&w * &y2)))
            .add(&pair(3, b, c).scale(&(&w * &w)))
    );
    assert_eq!(
        face_right(&op, &v, 1).unwrap(),
        pair(3, b, c)
            .scale(&y4)
            .add(&pair(3, b, a).scale(&(&y2 * &w)))
            .add(&pair(3, a, c).scale(&(&w * &y2)))
            .add(&pair(3, a, b).scale(&(&w * &w)))
    );
}

fn degree3_vanishing_classification() {
    let d3 = boundary(&homflypt(3), 3).unwrap();
    let mut zero_columns = 0usize;
    for t in BasisTuple::all(3, 3) {
        let l = t.letters();
        let (l0, l1, l2) = (l[0], l[1], l[2]);
        let should_vanish = l0 == 3
            || l2 == 1
            || (l0 >= l1 && l1 >= l2)
            || (l0 > l1 && l1 < l2 && l0 >= l2)
            || l0 == l2;
        let is_zero = d3.matrix().column(t.index()).iter().all(|p| p.is_zero());
        assert_eq!(is_zero, should_vanish, "column {t}");
        zero_columns += usize::from(is_zero);
    }
    assert_eq!(zero_columns, 18);
}

fn degree3_column_identities() {
    let op = homflypt(4);
    let d3 = boundary(&op, 3).unwrap();
    let col = |letters: [u8; 3]| -> Vec<LaurentPoly> {
        d3.matrix()
            .column(BasisTuple::new(4, letters.to_vec()).unwrap().index())
    };
    let sub = |x: &[LaurentPoly], y: &[LaurentPoly]| -> Vec<LaurentPoly> {
        x.iter().zip(y).map(|(p, q)| p - q).collect()
    };
    for a in 1..=4u8 {
        for b in (a + 1)..=4 {
            for c in (b + 1)..=4 {
                let lhs = sub(&sub(&col([a, b, c]), &col([a, c, b])), &col([b, a, c]));
                assert!(
                    lhs.iter().all(|p| p.is_zero()),
                    "identity fails at ({a},{b},{c})"
                );
            }
            // Boxed pair: the two degenerate columns add up to a multiple
            // of a difference of diagonal generators.
            let sum: Vec<LaurentPoly> = col([a, a, b])
                .iter()
                .zip(&col([a, b, b]))
                .map(|(p, q)| p + q)
                .collect();
            let w4 = one_minus_y4();
            let expected = pair(4, b, b).sub(&pair(4, a, a)).scale(&w4);
            for (i, p) in sum.iter().enumerate() {
                let t = BasisTuple::from_index(4, 2, i).unwrap();
                assert_eq!(*p, expected.coeff(&t), "entry {t} at pair ({a},{b})");
            }
        }
    }
}

fn degree3_divisibility() {
    for m in 2..=4 {
        let d3 = boundary(&homflypt(m), 3).unwrap();
        assert!(
            d3.entries_divisible_by(&one_minus_y2()).unwrap(),
            "an entry is not divisible at m={m}"
        );
    }
}

fn mirror_symmetry() {
    let op = homflypt(3);
    for t in BasisTuple::all(3, 3) {
        let v = TensorVector::basis(&t);
        let mv = mirror(&v);
        for i in 1..=3 {
            let lhs = face_left(&op, &mv, i).unwrap();
            let rhs = mirror(&face_right(&op, &v, 3 + 1 - i).unwrap());
            assert_eq!(lhs, rhs, "mirror symmetry fails at {t}, i={i}");
        }
    }
}

#[test]
fn criterion_9_property_suites() {
    criterion(9, "property suites", 300, || {
        smith_agrees_with_minors_oracle();
        degree3_face_values();
        degree3_vanishing_classification();
        degree3_column_identities();
        degree3_divisibility();
        mirror_symmetry();
    });
}
