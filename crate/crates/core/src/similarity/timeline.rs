use crate::hexsim::{Features, GameRecord, Player, FEATURE_COUNT, FEATURE_NAMES};

pub type Snapshot = [f64; FEATURE_COUNT];

/// Snapshots of one player's state taken every `interval` rounds.
#[derive(Clone, Debug, PartialEq)]
pub struct Timeline {
    pub interval: u32,
    pub snapshots: Vec<Snapshot>,
}

impl Timeline {
    /// Takes the state after rounds `interval`, `2 * interval`, ... up to the
    /// end of `features`, where `features[r]` is the state after round `r + 1`.
    pub fn sample(features: &[Features], interval: u32) -> Self {
        assert!(interval >= 1, "sample interval must be positive");
        let step = interval as usize;
        let snapshots = features.iter().skip(step - 1).step_by(step).map(|f| f.map(|v| v as f64)).collect();
        Self { interval, snapshots }
    }

    pub fn from_record(record: &GameRecord, player: Player, interval: u32) -> Self {
        Self::sample(record.features(player), interval)
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(std::iter::once("round").chain(FEATURE_NAMES)).expect("in-memory write");
        for (i, s) in self.snapshots.iter().enumerate() {
            let round = (i as u64 + 1) * self.interval as u64;
            w.write_record(std::iter::once(round.to_string()).chain(s.iter().map(f64::to_string)))
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}

/// Min-max normalizes both timelines to `[-1, 1]` using per-feature bounds
/// taken over the union of their snapshots. Constant features become 0.
pub fn normalize_joint(a: &[Snapshot], b: &[Snapshot]) -> (Vec<Snapshot>, Vec<Snapshot>) {
    let mut lo = [f64::INFINITY; FEATURE_COUNT];
    let mut hi = [f64::NEG_INFINITY; FEATURE_COUNT];
    for s in a.iter().chain(b) {
        for f in 0..FEATURE_COUNT {
            lo[f] = lo[f].min(s[f]);
            hi[f] = hi[f].max(s[f]);
        }
    }
    let map = |s: &Snapshot| -> Snapshot {
        std::array::from_fn(|f| if hi[f] > lo[f] { -1.0 + 2.0 * (s[f] - lo[f]) / (hi[f] - lo[f]) } else { 0.0 })
    };
    (a.iter().map(map).collect(), b.iter().map(map).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn feat(gold: u32) -> Features {
        let mut f = [0; FEATURE_COUNT];
        f[0] = gold;
        f
    }

    #[test]
    fn samples_every_interval() {
        let features: Vec<Features> = (1..=23).map(feat).collect();
        let t = Timeline::sample(&features, 5);
        assert_eq!(t.len(), 4);
        assert_eq!(t.snapshots.iter().map(|s| s[0]).collect::<Vec<_>>(), vec![5.0, 10.0, 15.0, 20.0]);
        assert!(Timeline::sample(&[], 5).is_empty());
        assert_eq!(Timeline::sample(&features, 1).len(), 23);
    }

    #[test]
    fn joint_normalization() {
        let mut a = [0.0; FEATURE_COUNT];
        let mut b = [0.0; FEATURE_COUNT];
        let mut c = [0.0; FEATURE_COUNT];
        a[0] = 0.0;
        b[0] = 100.0;
        c[0] = 50.0;
        a[1] = 7.0;
        b[1] = 7.0;
        c[1] = 7.0;
        let (na, nb) = normalize_joint(&[a, c], &[b]);
        assert_eq!(na[0][0], -1.0);
        assert_eq!(na[1][0], 0.0);
        assert_eq!(nb[0][0], 1.0);
        assert!(na.iter().chain(&nb).all(|s| s[1] == 0.0));
    }

    #[test]
    fn identical_inputs_normalize_identically() {
        let t: Vec<Snapshot> = (0..6).map(|i| std::array::from_fn(|f| (i * f) as f64)).collect();
        let (x, y) = normalize_joint(&t, &t);
        assert_eq!(x, y);
        assert!(x.iter().flatten().all(|v| (-1.0..=1.0).contains(v)));
    }

    #[test]
    fn csv_has_header_and_rounds() {
        let t = Timeline::sample(&[feat(3), feat(4)], 1);
        let text = t.to_csv();
        let mut lines = text.lines();
        assert!(lines.next().unwrap().starts_with("round,gold,units"));
        assert!(lines.next().unwrap().starts_with("1,3,0"));
    }
}
