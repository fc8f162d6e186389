/// Mean, sample standard deviation and standard error of a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleStats {
    pub count: usize,
    pub mean: f64,
    pub std_dev: f64,
    pub std_error: f64,
}

impl SampleStats {
    /// `None` for an empty sample. A single observation has zero spread.
    pub fn from_values<I: IntoIterator<Item = f64>>(values: I) -> Option<Self> {
        let v: Vec<f64> = values.into_iter().collect();
        if v.is_empty() {
            return None;
        }
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let var = if v.len() > 1 {
            v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        let std_dev = var.sqrt();
        Some(Self {
            count: v.len(),
            mean,
            std_dev,
            std_error: std_dev / n.sqrt(),
        })
    }
}

/// Statistics of `b − a` over the runs where both hit.
pub fn paired_difference(a: &[Option<usize>], b: &[Option<usize>]) -> Option<SampleStats> {
    SampleStats::from_values(
        a.iter().zip(b).filter_map(|pair| match pair {
            (Some(x), Some(y)) => Some(*y as f64 - *x as f64),
            _ => None,
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_stats() {
        let s = SampleStats::from_values([1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(s.mean, 2.5);
        assert!((s.std_dev - (5.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert!((s.std_error - s.std_dev / 2.0).abs() < 1e-12);
        assert!(SampleStats::from_values(std::iter::empty()).is_none());
        assert_eq!(SampleStats::from_values([7.0]).unwrap().std_dev, 0.0);
    }

    #[test]
    fn paired_skips_missing() {
        let a = [Some(1), None, Some(3)];
        let b = [Some(4), Some(9), None];
        let d = paired_difference(&a, &b).unwrap();
        assert_eq!(d.count, 1);
        assert_eq!(d.mean, 3.0);
    }
}
