//! TOML listing of parameter slots with their domains and default values.
//!
//! ```toml
//! [[param]]
//! name = "a.phase.1"
//! kind = "continuous"
//! lo = 0.0
//! hi = 5000.0
//! default = 2500.0
//!
//! [[param]]
//! name = "a.s1.layout"
//! kind = "discrete"
//! values = [1.0, 2.0]
//! default = 1.0
//! ```

use serde::{Deserialize, Serialize};

use super::{ParameterDescriptor, ParameterDomain, ParameterVector, SlotDomain};

#[derive(Serialize, Deserialize)]
struct DomainFile {
    param: Vec<Entry>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum Entry {
    Continuous {
        name: String,
        lo: f64,
        hi: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        default: Option<f64>,
    },
    Discrete {
        name: String,
        values: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        default: Option<f64>,
    },
}

/// Parsed domain file: descriptors in file order and optional defaults.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainListing {
    pub descriptors: Vec<ParameterDescriptor>,
    pub defaults: Vec<Option<f64>>,
}

impl DomainListing {
    pub fn parse(text: &str) -> Result<Self, String> {
        let file: DomainFile = toml::from_str(text).map_err(|e| e.to_string())?;
        let mut descriptors = Vec::new();
        let mut defaults = Vec::new();
        for e in file.param {
            let (name, domain, default) = match e {
                Entry::Continuous { name, lo, hi, default } => {
                    if lo.is_nan() || hi.is_nan() || lo > hi {
                        return Err(format!("`{name}`: empty interval [{lo}, {hi}]"));
                    }
                    (name, SlotDomain::continuous(lo, hi), default)
                }
                Entry::Discrete { name, values, default } => {
                    if values.is_empty() {
                        return Err(format!("`{name}`: no values"));
                    }
                    (name, SlotDomain::Discrete { values }, default)
                }
            };
            if let Some(d) = default {
                if !domain.contains(d) {
                    return Err(format!("`{name}`: default {d} outside domain"));
                }
            }
            if descriptors.iter().any(|x: &ParameterDescriptor| x.name == name) {
                return Err(format!("`{name}` listed twice"));
            }
            descriptors.push(ParameterDescriptor::new(name, domain));
            defaults.push(default);
        }
        Ok(Self { descriptors, defaults })
    }

    pub fn render(domain: &ParameterDomain, defaults: Option<&ParameterVector>) -> String {
        let param = domain
            .slots()
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let default = defaults.map(|d| d.get(i));
                match &s.domain {
                    SlotDomain::Continuous { lo, hi } => {
                        Entry::Continuous { name: s.name.clone(), lo: *lo, hi: *hi, default }
                    }
                    SlotDomain::Discrete { values } => {
                        Entry::Discrete { name: s.name.clone(), values: values.clone(), default }
                    }
                }
            })
            .collect();
        toml::to_string(&DomainFile { param }).expect("domain serializes")
    }

    /// Default vector ordered like `domain`; every slot needs a default.
    pub fn defaults_for(&self, domain: &ParameterDomain) -> Result<ParameterVector, String> {
        domain
            .slots()
            .iter()
            .map(|s| {
                let i = self
                    .descriptors
                    .iter()
                    .position(|d| d.name == s.name)
                    .ok_or_else(|| format!("`{}` not listed", s.name))?;
                self.defaults[i].ok_or_else(|| format!("`{}` has no default", s.name))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(ParameterVector)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_with_defaults() {
        let domain = ParameterDomain::new(vec![
            ParameterDescriptor::new("a", SlotDomain::continuous(0.0, 5000.0)),
            ParameterDescriptor::new("b", SlotDomain::values(&[0.25, 0.5])),
        ]);
        let defaults = ParameterVector(vec![2500.0, 0.5]);
        let text = DomainListing::render(&domain, Some(&defaults));
        let back = DomainListing::parse(&text).unwrap();
        assert_eq!(back.descriptors, domain.slots());
        assert_eq!(back.defaults_for(&domain).unwrap(), defaults);
    }

    #[test]
    fn rejects_bad_entries() {
        let bad_default = "[[param]]\nname='a'\nkind='continuous'\nlo=0.0\nhi=1.0\ndefault=2.0\n";
        assert!(DomainListing::parse(bad_default).unwrap_err().contains("outside"));
        let twice =
            "[[param]]\nname='a'\nkind='discrete'\nvalues=[1.0]\n[[param]]\nname='a'\nkind='discrete'\nvalues=[1.0]\n";
        assert!(DomainListing::parse(twice).is_err());
        assert!(DomainListing::parse("[[param]]\nname='a'\nkind='fuzzy'\n").is_err());
    }
}
