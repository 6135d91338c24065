use std::fmt;

use serde::{Deserialize, Serialize};

/// Axial hex coordinate. Ordering is lexicographic on `(q, r)`, which is the
/// tie-break order used throughout the simulator.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HexCoord {
    pub q: i32,
    pub r: i32,
}

impl HexCoord {
    /// The six axial neighbor offsets.
    pub const DIRECTIONS: [(i32, i32); 6] = [(1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1)];

    pub const fn new(q: i32, r: i32) -> Self {
        Self { q, r }
    }

    pub fn neighbors(self) -> impl Iterator<Item = HexCoord> {
        Self::DIRECTIONS.iter().map(move |&(dq, dr)| HexCoord::new(self.q + dq, self.r + dr))
    }

    /// Hex step distance.
    pub fn distance(self, other: HexCoord) -> u32 {
        let dq = self.q - other.q;
        let dr = self.r - other.r;
        ((dq.abs() + dr.abs() + (dq + dr).abs()) / 2) as u32
    }
}

impl fmt::Display for HexCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.q, self.r)
    }
}

impl std::str::FromStr for HexCoord {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (q, r) = s.split_once(',').ok_or_else(|| format!("expected `q,r`, got `{s}`"))?;
        let q = q.trim().parse().map_err(|_| format!("bad q in `{s}`"))?;
        let r = r.trim().parse().map_err(|_| format!("bad r in `{s}`"))?;
        Ok(HexCoord { q, r })
    }
}
