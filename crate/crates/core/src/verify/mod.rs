//! Sampled checks of metric inequalities, uniformity constants,
//! punctured-plane trigonometry and ratio level sets, with TOML reports.

mod inequalities;
mod levelset;
mod report;
mod sampling;
mod suites;
mod trig;
mod uniformity;

pub use inequalities::{inequality_suite, k_le_m_scan, SuiteConfig};
pub use levelset::{levelset_trace, ratio_field, Contour, LevelSet, LevelSetConfig};
pub use report::{CheckLevel, Report, VerificationReport};
pub use sampling::{PairSampler, SamplerKind};
pub use suites::{
    balls_suite, known_uniformity_constant, transforms_suite, trig_suite, trig_suite_sized, uniformity_suite,
    SUITES,
};
pub use trig::{
    halfplane_cosine_check, heron_area_check, law_of_cosines_check, CosineMargin, HeronCheck,
    LawOfCosines, TriangleKind,
};
pub use uniformity::{
    phi_uniform_check, uniformity_estimate, GrowthFunction, UniformityBudget, UniformityEstimate,
};

/// Maps `f` over `items` on scoped worker threads. Chunks are contiguous
/// and results keep input order, so the output does not depend on the
/// number of workers.
pub(crate) fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    if workers <= 1 || items.len() < 2 {
        return items.iter().map(f).collect();
    }
    let chunk = items.len().div_ceil(workers);
    let f = &f;
    std::thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| s.spawn(move || part.iter().map(f).collect::<Vec<R>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}
