use std::collections::VecDeque;

use super::CoarseningConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Continue,
    Stop,
}

/// Sliding window of pin-count samples used to detect the point where the
/// pin count stops declining linearly.
#[derive(Clone, Debug)]
pub struct CoarseningMonitor {
    window: VecDeque<f64>,
    capacity: usize,
    stride: usize,
    threshold: f64,
    contractions_since_sample: usize,
    active: bool,
    last_r_squared: Option<f64>,
}

impl CoarseningMonitor {
    pub fn new(cfg: &CoarseningConfig) -> Self {
        Self {
            window: VecDeque::with_capacity(cfg.sample_window),
            capacity: cfg.sample_window,
            stride: cfg.sample_stride,
            threshold: cfg.r_squared_threshold,
            contractions_since_sample: 0,
            active: false,
            last_r_squared: None,
        }
    }

    pub fn is_active(&self) -> bool {
        self.active
    }

    pub fn activate(&mut self) {
        self.active = true;
    }

    pub fn samples(&self) -> impl Iterator<Item = f64> + '_ {
        self.window.iter().copied()
    }

    pub fn last_r_squared(&self) -> Option<f64> {
        self.last_r_squared
    }

    /// Registers one contraction leaving `pins` pins. Activates the monitor
    /// if it is not yet active.
    pub fn step(&mut self, pins: usize) -> Decision {
        self.active = true;
        self.contractions_since_sample += 1;
        if self.contractions_since_sample < self.stride {
            return Decision::Continue;
        }
        self.contractions_since_sample = 0;
        if self.window.len() == self.capacity {
            self.window.pop_front();
        }
        self.window.push_back(pins as f64);
        if self.window.len() < self.capacity {
            return Decision::Continue;
        }
        let r2 = index_r_squared(self.window.iter().copied());
        self.last_r_squared = Some(r2);
        if r2 < self.threshold {
            Decision::Stop
        } else {
            Decision::Continue
        }
    }
}

/// Squared Pearson correlation between sample index and value. A window
/// with constant values counts as perfectly linear.
pub fn index_r_squared(values: impl ExactSizeIterator<Item = f64> + Clone) -> f64 {
    let n = values.len() as f64;
    let mean_x = (n - 1.0) / 2.0;
    let mean_y = values.clone().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (i, y) in values.enumerate() {
        let dx = i as f64 - mean_x;
        let dy = y - mean_y;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if syy == 0.0 || sxx == 0.0 {
        return 1.0;
    }
    (sxy * sxy) / (sxx * syy)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(window: usize) -> CoarseningConfig {
        CoarseningConfig {
            sample_stride: 1,
            sample_window: window,
            ..CoarseningConfig::default()
        }
    }

    fn feed(mon: &mut CoarseningMonitor, samples: &[usize]) -> Vec<Decision> {
        samples.iter().map(|&s| mon.step(s)).collect()
    }

    #[test]
    fn continues_until_window_full() {
        let mut mon = CoarseningMonitor::new(&cfg(5));
        let d = feed(&mut mon, &[100, 10, 100, 10]);
        assert!(d.iter().all(|&d| d == Decision::Continue));
        assert_eq!(mon.last_r_squared(), None);
    }

    #[test]
    fn linear_window_continues() {
        let mut mon = CoarseningMonitor::new(&cfg(5));
        let d = feed(&mut mon, &[100, 90, 80, 70, 60]);
        assert_eq!(d[4], Decision::Continue);
        assert!((mon.last_r_squared().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn knee_window_stops() {
        let mut mon = CoarseningMonitor::new(&cfg(5));
        let d = feed(&mut mon, &[100, 90, 80, 40, 10]);
        assert_eq!(d[4], Decision::Stop);
        let expected = 230.0f64.powi(2) / 57200.0;
        assert!((mon.last_r_squared().unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn constant_window_is_linear() {
        let mut mon = CoarseningMonitor::new(&cfg(3));
        assert_eq!(feed(&mut mon, &[7, 7, 7])[2], Decision::Continue);
        assert_eq!(mon.last_r_squared(), Some(1.0));
    }

    #[test]
    fn samples_every_stride() {
        let mut mon = CoarseningMonitor::new(&CoarseningConfig {
            sample_stride: 3,
            sample_window: 3,
            ..CoarseningConfig::default()
        });
        for p in (0..9).rev() {
            mon.step(p * 10);
        }
        assert_eq!(mon.samples().collect::<Vec<_>>(), vec![60.0, 30.0, 0.0]);
        for p in 0..30 {
            mon.step(p);
            assert!(mon.samples().count() <= 3);
        }
    }
}
