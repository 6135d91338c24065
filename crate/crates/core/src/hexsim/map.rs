use std::fmt::Write as _;

use super::{ConfigError, HexCoord, Player};

/// Static terrain: a `width x height` block of axial cells, each enabled or
/// disabled, plus the two castle start cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Map {
    width: i32,
    height: i32,
    enabled: Vec<bool>,
    starts: [HexCoord; 2],
}

/// Map shipped with the crate: a 16x10 field split by a river with three fords.
pub const DEFAULT_MAP: &str = "\
# default skirmish map
16 10
C red 2 5
C green 13 4
D 7 0
D 7 1
D 7 3
D 7 4
D 7 6
D 7 7
D 7 9
D 8 0
D 8 3
D 8 6
D 8 9
D 4 1
D 3 8
D 11 8
D 12 1
D 5 4
D 10 5
";

impl Map {
    pub fn new(width: i32, height: i32, starts: [HexCoord; 2]) -> Result<Self, ConfigError> {
        if width <= 0 || height <= 0 {
            return Err(ConfigError::Map(format!("bad dimensions {width}x{height}")));
        }
        let map = Self { width, height, enabled: vec![true; (width * height) as usize], starts };
        for s in starts {
            if !map.in_bounds(s) {
                return Err(ConfigError::Map(format!("start cell {s} outside map")));
            }
        }
        if starts[0] == starts[1] {
            return Err(ConfigError::Map("both castles on one cell".into()));
        }
        Ok(map)
    }

    pub fn default_map() -> Self {
        Self::parse(DEFAULT_MAP).expect("built-in map parses")
    }

    /// Parses the line format: `W H`, then `C red q r`, `C green q r` and any
    /// number of `D q r` lines. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut dims = None;
        let mut starts: [Option<HexCoord>; 2] = [None, None];
        let mut disabled = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| ConfigError::Map(format!("line {}: {msg}: `{raw}`", lineno + 1));
            let fields: Vec<&str> = line.split_whitespace().collect();
            let int = |s: &str| s.parse::<i32>().map_err(|_| err("expected integer"));
            match fields.as_slice() {
                ["C", who, q, r] => {
                    let player: Player = who.parse().map_err(|_| err("unknown player"))?;
                    starts[player.index()] = Some(HexCoord::new(int(q)?, int(r)?));
                }
                ["D", q, r] => disabled.push(HexCoord::new(int(q)?, int(r)?)),
                [w, h] if dims.is_none() => dims = Some((int(w)?, int(h)?)),
                _ => return Err(err("unrecognized line")),
            }
        }
        let (w, h) = dims.ok_or_else(|| ConfigError::Map("missing `W H` header".into()))?;
        let red = starts[0].ok_or_else(|| ConfigError::Map("missing red castle".into()))?;
        let green = starts[1].ok_or_else(|| ConfigError::Map("missing green castle".into()))?;
        let mut map = Map::new(w, h, [red, green])?;
        for c in disabled {
            if !map.in_bounds(c) {
                return Err(ConfigError::Map(format!("disabled cell {c} outside map")));
            }
            map.set_enabled(c, false);
        }
        for s in map.starts {
            if !map.is_enabled(s) {
                return Err(ConfigError::Map(format!("start cell {s} is disabled")));
            }
        }
        Ok(map)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.width, self.height);
        for p in Player::BOTH {
            let s = self.starts[p.index()];
            let _ = writeln!(out, "C {} {} {}", p, s.q, s.r);
        }
        for c in self.cells() {
            if !self.is_enabled(c) {
                let _ = writeln!(out, "D {} {}", c.q, c.r);
            }
        }
        out
    }

    pub fn width(&self) -> i32 {
        self.width
    }

    pub fn height(&self) -> i32 {
        self.height
    }

    pub fn start(&self, player: Player) -> HexCoord {
        self.starts[player.index()]
    }

    pub fn in_bounds(&self, c: HexCoord) -> bool {
        c.q >= 0 && c.r >= 0 && c.q < self.width && c.r < self.height
    }

    pub fn index(&self, c: HexCoord) -> Option<usize> {
        self.in_bounds(c).then(|| (c.r * self.width + c.q) as usize)
    }

    pub fn coord(&self, index: usize) -> HexCoord {
        let i = index as i32;
        HexCoord::new(i % self.width, i / self.width)
    }

    pub fn cell_count(&self) -> usize {
        self.enabled.len()
    }

    pub fn is_enabled(&self, c: HexCoord) -> bool {
        self.index(c).is_some_and(|i| self.enabled[i])
    }

    pub(crate) fn set_enabled(&mut self, c: HexCoord, on: bool) {
        if let Some(i) = self.index(c) {
            self.enabled[i] = on;
        }
    }

    /// All cells in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = HexCoord> + '_ {
        (0..self.enabled.len()).map(|i| self.coord(i))
    }

    pub fn enabled_cells(&self) -> impl Iterator<Item = HexCoord> + '_ {
        self.cells().filter(|&c| self.is_enabled(c))
    }

    pub fn enabled_neighbors(&self, c: HexCoord) -> impl Iterator<Item = HexCoord> + '_ {
        c.neighbors().filter(|&n| self.is_enabled(n))
    }
}
