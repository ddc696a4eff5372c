//! Central finite-difference gradient checking.

use rand::seq::index::sample;

use super::init::seeded_rng;
use super::{Matrix, ParamStore};

#[derive(Clone, Debug, PartialEq)]
pub struct GradCheckReport {
    /// Worst relative error over all checked scalars.
    pub max_rel_error: f64,
    /// Worst relative error per parameter tensor, in store order.
    pub per_param: Vec<(String, f64)>,
    pub checked: usize,
}

/// Which scalars of each tensor to perturb.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sampling {
    All,
    /// Up to `per_param` distinct scalars per tensor, chosen with `seed`.
    Random {
        per_param: usize,
        seed: u64,
    },
}

/// `|a - n| / max(|a|, |n|, 1e-8)`
pub fn relative_error(analytic: f64, numeric: f64) -> f64 {
    (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-8)
}

/// Compares `analytic` (one tensor per parameter) against central
/// differences `(loss(p + h) - loss(p - h)) / 2h`. Every perturbed scalar is
/// restored before returning.
pub fn gradient_check<F>(
    mut loss_fn: F,
    store: &mut ParamStore,
    analytic: &[Matrix],
    h: f64,
    sampling: Sampling,
) -> GradCheckReport
where
    F: FnMut(&ParamStore) -> f64,
{
    assert_eq!(analytic.len(), store.len(), "one analytic gradient per parameter");
    let mut rng = match sampling {
        Sampling::Random { seed, .. } => Some(seeded_rng(seed)),
        Sampling::All => None,
    };
    let mut report = GradCheckReport { max_rel_error: 0.0, per_param: Vec::new(), checked: 0 };

    for id in store.ids().collect::<Vec<_>>() {
        let n = store.value(id).len();
        let positions: Vec<usize> = match (&mut rng, sampling) {
            (Some(rng), Sampling::Random { per_param, .. }) if per_param < n => {
                let mut p = sample(rng, n, per_param).into_vec();
                p.sort_unstable();
                p
            }
            _ => (0..n).collect(),
        };

        let mut worst = 0.0f64;
        for pos in positions {
            let orig = store.value(id).as_slice()[pos];
            store.value_mut(id).as_mut_slice()[pos] = orig + h;
            let plus = loss_fn(store);
            store.value_mut(id).as_mut_slice()[pos] = orig - h;
            let minus = loss_fn(store);
            store.value_mut(id).as_mut_slice()[pos] = orig;

            let numeric = (plus - minus) / (2.0 * h);
            let err = relative_error(analytic[id.index()].as_slice()[pos], numeric);
            worst = worst.max(err);
            report.checked += 1;
        }
        report.max_rel_error = report.max_rel_error.max(worst);
        report.per_param.push((store.param(id).name.clone(), worst));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn store_with(p: f64) -> ParamStore {
        let mut s = ParamStore::new();
        s.add("p", Matrix::from_vec(1, 1, vec![p]).unwrap());
        s
    }

    fn grad(g: f64) -> Vec<Matrix> {
        vec![Matrix::from_vec(1, 1, vec![g]).unwrap()]
    }

    fn square(s: &ParamStore) -> f64 {
        let p = s.iter().next().unwrap().value.get(0, 0);
        p * p
    }

    #[test]
    fn quadratic_is_exact() {
        let mut s = store_with(3.0);
        let r = gradient_check(square, &mut s, &grad(6.0), 1e-4, Sampling::All);
        assert!(r.max_rel_error < 1e-6, "{:?}", r);
        assert_eq!(r.checked, 1);
        assert_eq!(s.iter().next().unwrap().value.get(0, 0), 3.0);
    }

    #[test]
    fn doubled_gradient_is_flagged() {
        // |2g - g| / 2g = 1/2 for g = 6; with the analytic side doubled the
        // numeric one is half of it.
        let mut s = store_with(3.0);
        let r = gradient_check(square, &mut s, &grad(12.0), 1e-4, Sampling::All);
        assert!((r.max_rel_error - 0.5).abs() < 1e-6, "{:?}", r);
    }

    #[test]
    fn constant_loss() {
        let mut s = store_with(3.0);
        let r = gradient_check(|_| 1.25, &mut s, &grad(0.0), 1e-4, Sampling::All);
        assert!(r.max_rel_error < 1e-6);
    }

    #[test]
    fn random_sampling_limits_count() {
        let mut s = ParamStore::new();
        s.add("m", Matrix::zeros(4, 5));
        let r =
            gradient_check(|_| 0.0, &mut s, &[Matrix::zeros(4, 5)], 1e-4, Sampling::Random { per_param: 3, seed: 1 });
        assert_eq!(r.checked, 3);
    }
}
