use std::any::Any;
use std::collections::BTreeMap;
use std::fmt;

/// Shared key-value memory of one tree instance. Values are typed; a `get`
/// with the wrong type behaves like a missing key.
#[derive(Default)]
pub struct Blackboard {
    entries: BTreeMap<String, Box<dyn Any + Send + Sync>>,
}

impl Blackboard {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set<T: Any + Send + Sync>(&mut self, key: impl Into<String>, value: T) {
        self.entries.insert(key.into(), Box::new(value));
    }

    pub fn get<T: Any>(&self, key: &str) -> Option<&T> {
        self.entries.get(key)?.downcast_ref()
    }

    pub fn get_mut<T: Any>(&mut self, key: &str) -> Option<&mut T> {
        self.entries.get_mut(key)?.downcast_mut()
    }

    pub fn take<T: Any>(&mut self, key: &str) -> Option<T> {
        let boxed = self.entries.remove(key)?;
        match boxed.downcast::<T>() {
            Ok(v) => Some(*v),
            Err(other) => {
                self.entries.insert(key.to_string(), other);
                None
            }
        }
    }

    pub fn remove(&mut self, key: &str) -> bool {
        self.entries.remove(key).is_some()
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    /// Drops every key starting with `prefix`.
    pub fn clear_prefix(&mut self, prefix: &str) {
        self.entries.retain(|k, _| !k.starts_with(prefix));
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl fmt::Debug for Blackboard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.entries.keys()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn typed_access() {
        let mut bb = Blackboard::new();
        bb.set("gold", 500i64);
        assert_eq!(bb.get::<i64>("gold"), Some(&500));
        assert_eq!(bb.get::<u32>("gold"), None);
        *bb.get_mut::<i64>("gold").unwrap() += 1;
        assert_eq!(bb.take::<u32>("gold"), None);
        assert_eq!(bb.take::<i64>("gold"), Some(501));
        assert!(bb.is_empty());
    }

    #[test]
    fn prefix_clear() {
        let mut bb = Blackboard::new();
        bb.set("trigger.a", true);
        bb.set("trigger.b", true);
        bb.set("world", 1u8);
        bb.clear_prefix("trigger.");
        assert_eq!(bb.keys().collect::<Vec<_>>(), vec!["world"]);
    }
}
