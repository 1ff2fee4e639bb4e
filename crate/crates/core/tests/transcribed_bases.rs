//! Effects built by hand from the Gell-Mann sets as printed for the qutrit
//! (8,2) and ququart (5,4) examples, compared against the library presets.

use nalgebra::DMatrix;
use num_complex::Complex64;
use symconc::povm::{build_preset, t_range, GroupingPreset};
use symconc::{gell_mann_basis, x_of_t};

type M = DMatrix<Complex64>;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn sym(d: usize, i: usize, j: usize) -> M {
    let mut m = M::zeros(d, d);
    m[(i, j)] = Complex64::new(1.0, 0.0);
    m[(j, i)] = Complex64::new(1.0, 0.0);
    m / Complex64::new(2f64.sqrt(), 0.0)
}

fn asym(d: usize, i: usize, j: usize) -> M {
    let mut m = M::zeros(d, d);
    m[(i, j)] = -I;
    m[(j, i)] = I;
    m / Complex64::new(2f64.sqrt(), 0.0)
}

fn diag(entries: &[f64], norm: f64) -> M {
    M::from_diagonal(&nalgebra::DVector::from_iterator(
        entries.len(),
        entries.iter().map(|&v| Complex64::new(v / norm, 0.0)),
    ))
}

/// Qutrit basis in the printed order G_11 ... G_81.
fn qutrit_groups() -> Vec<Vec<M>> {
    vec![
        vec![sym(3, 0, 1)],
        vec![asym(3, 0, 1)],
        vec![sym(3, 0, 2)],
        vec![asym(3, 0, 2)],
        vec![sym(3, 1, 2)],
        vec![asym(3, 1, 2)],
        vec![diag(&[1.0, -1.0, 0.0], 2f64.sqrt())],
        vec![diag(&[1.0, 1.0, -2.0], 6f64.sqrt())],
    ]
}

/// Ququart basis in the printed order G_11 ... G_53.
fn ququart_groups() -> Vec<Vec<M>> {
    vec![
        vec![asym(4, 0, 1), asym(4, 0, 2), asym(4, 0, 3)],
        vec![sym(4, 0, 1), asym(4, 1, 2), asym(4, 1, 3)],
        vec![sym(4, 0, 2), sym(4, 1, 2), asym(4, 2, 3)],
        vec![sym(4, 0, 3), sym(4, 1, 3), sym(4, 2, 3)],
        vec![
            diag(&[1.0, -1.0, 0.0, 0.0], 2f64.sqrt()),
            diag(&[1.0, 1.0, -2.0, 0.0], 6f64.sqrt()),
            diag(&[1.0, 1.0, 1.0, -3.0], 2.0 * 3f64.sqrt()),
        ],
    ]
}

fn hand_effects(groups: &[Vec<M>], d: usize, t: f64) -> Vec<M> {
    let m = groups[0].len() + 1;
    let sm = (m as f64).sqrt();
    let id = M::identity(d, d) / Complex64::new(m as f64, 0.0);
    let mut out = Vec::new();
    for g in groups {
        let total = g.iter().fold(M::zeros(d, d), |a, b| a + b);
        for gk in g {
            let h = &total - gk * Complex64::new(sm * (sm + 1.0), 0.0);
            out.push(&id + h * Complex64::new(t, 0.0));
        }
        out.push(&id + &total * Complex64::new(t * (sm + 1.0), 0.0));
    }
    out
}

/// Smallest eigenvalue through the real symmetric embedding
/// `[[A, -B], [B, A]]` of `A + iB`.
fn min_eig(h: &M) -> f64 {
    let n = h.nrows();
    let big = DMatrix::<f64>::from_fn(2 * n, 2 * n, |r, c| {
        let z = h[(r % n, c % n)];
        match (r < n, c < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    big.symmetric_eigen().eigenvalues.min()
}

fn boundary(groups: &[Vec<M>], d: usize, sign: f64) -> f64 {
    let ok = |t: f64| hand_effects(groups, d, t).iter().all(|e| min_eig(e) >= 0.0);
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if ok(sign * mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    sign * lo
}

fn max_diff(a: &[M], b: &[M]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).iter().map(|z| z.norm()).fold(0.0, f64::max))
        .fold(0.0, f64::max)
}

#[test]
fn qutrit_preset_matches_printed_basis() {
    for &t in &[0.01, -0.2, 0.25] {
        let p = build_preset(3, 8, 2, GroupingPreset::PaperEx1, t).unwrap();
        let hand = hand_effects(&qutrit_groups(), 3, t);
        assert!(max_diff(p.effects(), &hand) < 1e-14, "t = {t}");
    }
}

#[test]
fn ququart_preset_matches_printed_basis() {
    for &t in &[0.01, -0.05, 0.06] {
        let p = build_preset(4, 5, 4, GroupingPreset::PaperEx4, t).unwrap();
        let hand = hand_effects(&ququart_groups(), 4, t);
        assert!(max_diff(p.effects(), &hand) < 1e-14, "t = {t}");
    }
}

#[test]
fn printed_purity_formulas() {
    for &t in &[0.0, 0.01, 0.1, -0.2] {
        let q3 = 0.75 + t * t * (2f64.sqrt() + 1.0).powi(2);
        assert!((x_of_t(3, 2, t) - q3).abs() < 1e-15);
        let q4 = 0.25 + 27.0 * t * t;
        assert!((x_of_t(4, 4, t) - q4).abs() < 1e-15);
    }
}

#[test]
fn t_range_agrees_with_eigenvalue_scan() {
    let basis3 = gell_mann_basis(3).unwrap();
    let g3 = symconc::povm::Grouping::preset(GroupingPreset::PaperEx1, 3, 8, 2).unwrap();
    let (lo, hi) = t_range(&basis3, &g3).unwrap();
    assert!((lo - boundary(&qutrit_groups(), 3, -1.0)).abs() < 1e-11);
    assert!((hi - boundary(&qutrit_groups(), 3, 1.0)).abs() < 1e-11);

    let basis4 = gell_mann_basis(4).unwrap();
    let g4 = symconc::povm::Grouping::preset(GroupingPreset::PaperEx4, 4, 5, 4).unwrap();
    let (lo, hi) = t_range(&basis4, &g4).unwrap();
    assert!((lo - boundary(&ququart_groups(), 4, -1.0)).abs() < 1e-11);
    assert!((hi - boundary(&ququart_groups(), 4, 1.0)).abs() < 1e-11);
}
