//! Deterministic parallel drivers.
//!
//! Work items are independent and each is computed sequentially, so the
//! results are bit-identical for every thread count; rayon's indexed
//! `collect` keeps them in input order.

use fiolab_core::fio::FioPlan;
use fiolab_core::{Complex64, GridFunction};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Run `f` inside a pool of `threads` workers (`0` lets rayon decide).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Usage(format!("cannot start {threads} worker threads: {e}")))?;
    Ok(pool.install(f))
}

/// Order-preserving parallel map with early error propagation.
pub fn try_map<I, T, F>(items: &[I], f: F) -> Result<Vec<T>>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> Result<T> + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// [`FioPlan::evaluate`] with the output points spread over the current pool.
pub fn evaluate_plan(plan: &FioPlan<'_>) -> Result<GridFunction> {
    let values: Vec<Complex64> =
        (0..plan.spec().len()).into_par_iter().map(|i| plan.value_at(i)).collect::<fiolab_core::Result<_>>()?;
    Ok(GridFunction::new(*plan.spec(), values)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use fiolab_core::fio::{AnisotropicPhase, FioOperator, JapaneseAmplitude};
    use fiolab_core::GridSpec;

    #[test]
    fn plan_evaluation_is_thread_count_independent() {
        let spec = GridSpec::new(2, 6.0, 16).unwrap();
        let f = GridFunction::from_real_fn(spec, |x| (-(x[0] * x[0] + 2.0 * x[1] * x[1])).exp()).unwrap();
        let op = FioOperator::new(Arc::new(JapaneseAmplitude { m: -0.5 }), Arc::new(AnisotropicPhase::default()));
        let plan = FioPlan::new(&op, &f);
        let serial = plan.evaluate().unwrap();
        for threads in [1, 3] {
            let par = with_threads(threads, || evaluate_plan(&plan)).unwrap().unwrap();
            assert_eq!(par.values(), serial.values());
        }
    }

    #[test]
    fn map_keeps_order_and_reports_errors() {
        let items: Vec<u32> = (0..50).collect();
        let out = with_threads(4, || try_map(&items, |&i| Ok(i * i))).unwrap().unwrap();
        assert_eq!(out, items.iter().map(|i| i * i).collect::<Vec<_>>());
        let err = with_threads(2, || try_map(&items, |&i| if i == 7 { Err(Error::Usage("seven".into())) } else { Ok(i) }));
        assert!(err.unwrap().is_err());
    }
}
