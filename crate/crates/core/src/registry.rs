//! Name-keyed registries of interchangeable strategies.

use thiserror::Error;

pub trait Named {
    fn name(&self) -> &'static str;
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RegistryError {
    #[error("`{0}` is already registered")]
    Duplicate(String),
    #[error("unknown {kind} `{name}` (known: {known})")]
    Unknown {
        kind: &'static str,
        name: String,
        known: String,
    },
}

pub struct Registry<T: ?Sized + Named> {
    kind: &'static str,
    entries: Vec<Box<T>>,
}

impl<T: ?Sized + Named> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Registry {
            kind,
            entries: Vec::new(),
        }
    }

    pub fn register(&mut self, entry: Box<T>) -> Result<(), RegistryError> {
        if self.entries.iter().any(|e| e.name() == entry.name()) {
            return Err(RegistryError::Duplicate(entry.name().to_string()));
        }
        self.entries.push(entry);
        Ok(())
    }

    pub fn with(mut self, entry: Box<T>) -> Self {
        self.register(entry).expect("builtin names are distinct");
        self
    }

    pub fn get(&self, name: &str) -> Result<&T, RegistryError> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .map(|e| e.as_ref())
            .ok_or_else(|| RegistryError::Unknown {
                kind: self.kind,
                name: name.to_string(),
                known: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }
}
