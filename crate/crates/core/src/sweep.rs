// SPDX-License-Identifier: Apache-2.0

//! Case-parallel mapping for law sweeps.
//!
//! With the `parallel` feature (on by default) cases are spread over the
//! rayon pool; without it, or with [`Mode::Sequential`], they run in order
//! on the calling thread. Results always come back in case order, so reports
//! do not depend on the mode.

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    Sequential,
    #[default]
    Parallel,
}

pub fn map_cases<R, F>(mode: Mode, cases: u64, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> R + Sync + Send,
{
    match mode {
        Mode::Sequential => (0..cases).map(f).collect(),
        Mode::Parallel => parallel(cases, f),
    }
}

#[cfg(feature = "parallel")]
fn parallel<R, F>(cases: u64, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> R + Sync + Send,
{
    use rayon::prelude::*;
    (0..cases).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn parallel<R, F>(cases: u64, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> R + Sync + Send,
{
    (0..cases).map(f).collect()
}
