//! Piecewise-constant reference schedules.

/// Ordered `(start_time, value)` pairs; the value of the latest entry with
/// `start_time <= t` is in effect, so a boundary instant belongs to the new
/// segment.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSchedule {
    points: Vec<(f64, f64)>,
}

impl ReferenceSchedule {
    /// Builds a schedule without validating; pair with [`Self::problems`].
    pub fn new(points: Vec<(f64, f64)>) -> Self {
        Self { points }
    }

    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.points.is_empty() {
            out.push("reference schedule must have at least one entry".into());
            return out;
        }
        if self.points[0].0 != 0.0 {
            out.push(format!(
                "reference schedule must start at t = 0, got {}",
                self.points[0].0
            ));
        }
        for pair in self.points.windows(2) {
            if pair[1].0 <= pair[0].0 {
                out.push(format!(
                    "schedule times must be strictly increasing ({} then {})",
                    pair[0].0, pair[1].0
                ));
            }
        }
        if self.points.iter().any(|(t, v)| !t.is_finite() || !v.is_finite()) {
            out.push("schedule entries must be finite".into());
        }
        out
    }

    /// Reference value at time `t`.
    pub fn value_at(&self, t: f64) -> f64 {
        let idx = self.points.partition_point(|&(start, _)| start <= t);
        if idx == 0 {
            self.points[0].1
        } else {
            self.points[idx - 1].1
        }
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn latest_entry_wins() {
        let s = ReferenceSchedule::new(vec![(0.0, 0.0), (10.0, 0.2)]);
        assert_eq!(s.value_at(5.0), 0.0);
        // boundary belongs to the new segment
        assert_eq!(s.value_at(10.0), 0.2);
        assert_eq!(s.value_at(11.0), 0.2);
    }

    #[test]
    fn three_level_schedule_has_three_plateaus() {
        let s = ReferenceSchedule::new(vec![(0.0, 0.0), (15.0, 0.2), (30.0, 0.3)]);
        let values: Vec<f64> = (0..45).map(|t| s.value_at(t as f64)).collect();
        let mut plateaus = vec![values[0]];
        for v in &values {
            if *v != *plateaus.last().unwrap() {
                plateaus.push(*v);
            }
        }
        assert_eq!(plateaus, vec![0.0, 0.2, 0.3]);
    }

    #[test]
    fn validation_catches_bad_schedules() {
        assert!(!ReferenceSchedule::new(vec![]).problems().is_empty());
        assert!(!ReferenceSchedule::new(vec![(1.0, 0.2)]).problems().is_empty());
        assert!(!ReferenceSchedule::new(vec![(0.0, 0.0), (0.0, 0.1)])
            .problems()
            .is_empty());
        assert!(ReferenceSchedule::new(vec![(0.0, 0.0), (10.0, 0.2)])
            .problems()
            .is_empty());
    }

    proptest! {
        #[test]
        fn value_is_a_scheduled_value(t in 0.0f64..100.0) {
            let s = ReferenceSchedule::new(vec![(0.0, 0.1), (20.0, 0.2), (50.0, 0.3)]);
            let v = s.value_at(t);
            prop_assert!([0.1, 0.2, 0.3].contains(&v));
            // consistent with a linear scan
            let scan = s.points().iter().filter(|(s0, _)| *s0 <= t).last().unwrap().1;
            prop_assert_eq!(v, scan);
        }
    }
}
