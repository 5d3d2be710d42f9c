//! Ordered map over quadrature nodes or restarts.
//!
//! With the `parallel` feature the map runs on the rayon pool; without it the
//! map is a plain iterator. Results always come back in index order and every
//! reduction over them is done sequentially, so both builds produce the same
//! bits.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Below this many items the parallel build still maps sequentially.
pub const PAR_THRESHOLD: usize = 32;

#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    if count < PAR_THRESHOLD {
        return (0..count).map(f).collect();
    }
    (0..count).into_par_iter().with_min_len(8).map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..count).map(f).collect()
}

/// Like [`map_indexed`] but without the small-input cutoff, for coarse work
/// items such as independent minimizations.
#[cfg(feature = "parallel")]
pub fn map_tasks<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_tasks<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..count).map(f).collect()
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

/// Neumaier compensated sum, evaluated left to right.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
