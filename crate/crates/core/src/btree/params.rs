use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Domain of a single parameter slot. Continuous intervals are closed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum SlotDomain {
    Continuous { lo: f64, hi: f64 },
    Discrete { values: Vec<f64> },
}

impl SlotDomain {
    pub fn continuous(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        SlotDomain::Continuous { lo, hi }
    }

    /// Integers `lo..=hi`.
    pub fn int_range(lo: i64, hi: i64) -> Self {
        assert!(lo <= hi);
        SlotDomain::Discrete { values: (lo..=hi).map(|v| v as f64).collect() }
    }

    pub fn values(values: &[f64]) -> Self {
        assert!(!values.is_empty());
        SlotDomain::Discrete { values: values.to_vec() }
    }

    pub fn contains(&self, v: f64) -> bool {
        match self {
            SlotDomain::Continuous { lo, hi } => *lo <= v && v <= *hi,
            SlotDomain::Discrete { values } => values.contains(&v),
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, SlotDomain::Discrete { .. })
    }

    pub fn bounds(&self) -> (f64, f64) {
        match self {
            SlotDomain::Continuous { lo, hi } => (*lo, *hi),
            SlotDomain::Discrete { values } => {
                values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)))
            }
        }
    }

    pub fn width(&self) -> f64 {
        let (lo, hi) = self.bounds();
        hi - lo
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            SlotDomain::Continuous { lo, hi } if lo == hi => *lo,
            SlotDomain::Continuous { lo, hi } => rng.random_range(*lo..=*hi),
            SlotDomain::Discrete { values } => *values.choose(rng).expect("non-empty"),
        }
    }

    pub fn clamp(&self, v: f64) -> f64 {
        let (lo, hi) = self.bounds();
        v.clamp(lo, hi)
    }

    /// Intersection with `[lo, hi]`; `None` when empty.
    pub fn restrict(&self, lo: f64, hi: f64) -> Option<SlotDomain> {
        match self {
            SlotDomain::Continuous { lo: a, hi: b } => {
                let (l, h) = (a.max(lo), b.min(hi));
                (l <= h).then(|| SlotDomain::continuous(l, h))
            }
            SlotDomain::Discrete { values } => {
                let kept: Vec<f64> = values.iter().copied().filter(|v| (lo..=hi).contains(v)).collect();
                (!kept.is_empty()).then_some(SlotDomain::Discrete { values: kept })
            }
        }
    }

    /// `count >= 2` evenly spaced points from low to high bound; discrete
    /// domains snap each point to the nearest member.
    pub fn grid(&self, count: usize) -> Vec<f64> {
        let (lo, hi) = self.bounds();
        (0..count)
            .map(|i| {
                let x = lo + (hi - lo) * i as f64 / (count - 1) as f64;
                match self {
                    SlotDomain::Continuous { .. } => x,
                    SlotDomain::Discrete { values } => {
                        *values.iter().min_by(|a, b| (*a - x).abs().total_cmp(&(*b - x).abs())).expect("non-empty")
                    }
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParameterDescriptor {
    pub name: String,
    pub domain: SlotDomain,
}

impl ParameterDescriptor {
    pub fn new(name: impl Into<String>, domain: SlotDomain) -> Self {
        Self { name: name.into(), domain }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DomainError {
    #[error("expected {expected} parameters, got {got}")]
    Length { expected: usize, got: usize },
    #[error("parameter `{name}` = {value} outside its domain")]
    OutOfDomain { name: String, value: f64 },
    #[error("unknown parameter `{0}`")]
    Unknown(String),
    #[error("restriction of `{0}` leaves an empty domain")]
    EmptyRestriction(String),
}

/// Ordered product of slot domains.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ParameterDomain {
    slots: Vec<ParameterDescriptor>,
}

impl ParameterDomain {
    pub fn new(slots: Vec<ParameterDescriptor>) -> Self {
        Self { slots }
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn slots(&self) -> &[ParameterDescriptor] {
        &self.slots
    }

    pub fn slot(&self, i: usize) -> &ParameterDescriptor {
        &self.slots[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.slots.iter().position(|s| s.name == name)
    }

    pub fn validate(&self, p: &ParameterVector) -> Result<(), DomainError> {
        if p.len() != self.len() {
            return Err(DomainError::Length { expected: self.len(), got: p.len() });
        }
        for (slot, &v) in self.slots.iter().zip(p.values()) {
            if !slot.domain.contains(v) {
                return Err(DomainError::OutOfDomain { name: slot.name.clone(), value: v });
            }
        }
        Ok(())
    }

    pub fn contains(&self, p: &ParameterVector) -> bool {
        self.validate(p).is_ok()
    }

    /// Uniform draw per slot.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ParameterVector {
        ParameterVector(self.slots.iter().map(|s| s.domain.sample(rng)).collect())
    }

    /// Narrows one slot to `[lo, hi]`.
    pub fn restrict(&mut self, name: &str, lo: f64, hi: f64) -> Result<(), DomainError> {
        let i = self.index_of(name).ok_or_else(|| DomainError::Unknown(name.into()))?;
        let narrowed =
            self.slots[i].domain.restrict(lo, hi).ok_or_else(|| DomainError::EmptyRestriction(name.into()))?;
        self.slots[i].domain = narrowed;
        Ok(())
    }

    /// Replaces a slot's domain with an explicit subset of it.
    pub fn restrict_values(&mut self, name: &str, values: &[f64]) -> Result<(), DomainError> {
        let i = self.index_of(name).ok_or_else(|| DomainError::Unknown(name.into()))?;
        if values.is_empty() {
            return Err(DomainError::EmptyRestriction(name.into()));
        }
        if let Some(&value) = values.iter().find(|&&v| !self.slots[i].domain.contains(v)) {
            return Err(DomainError::OutOfDomain { name: name.into(), value });
        }
        self.slots[i].domain = SlotDomain::values(values);
        Ok(())
    }
}

/// Parameter values in slot order. Discrete values are stored as `f64` too.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParameterVector(pub Vec<f64>);

impl ParameterVector {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, v: f64) {
        self.0[i] = v;
    }

    /// Exact bit-level key; `-0.0` is folded into `0.0`.
    pub fn key(&self) -> Vec<u64> {
        self.0.iter().map(|&v| if v == 0.0 { 0 } else { v.to_bits() }).collect()
    }
}
