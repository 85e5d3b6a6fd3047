/// Source of elapsed wall-clock time for time-limited searches.
pub trait Clock {
    /// Seconds elapsed since the clock was started.
    fn elapsed_secs(&self) -> f64;
}

/// A clock that never advances. Time limits never fire.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeverExpires;

impl Clock for NeverExpires {
    fn elapsed_secs(&self) -> f64 {
        0.0
    }
}

impl<C: Clock + ?Sized> Clock for &C {
    fn elapsed_secs(&self) -> f64 {
        (**self).elapsed_secs()
    }
}
