//! Minimal `--name value` flag parsing. Every flag takes exactly one value;
//! unknown, duplicate or valueless flags are usage errors.

use std::collections::BTreeMap;
use std::str::FromStr;

pub struct Flags {
    values: BTreeMap<String, String>,
}

impl Flags {
    pub fn parse(args: &[String], allowed: &[&str]) -> Result<Flags, String> {
        let mut values = BTreeMap::new();
        let mut iter = args.iter();
        while let Some(arg) = iter.next() {
            let Some(name) = arg.strip_prefix("--") else {
                return Err(format!("unexpected argument {arg:?}"));
            };
            if !allowed.contains(&name) {
                return Err(format!("unknown flag --{name}"));
            }
            let Some(value) = iter.next() else {
                return Err(format!("flag --{name} needs a value"));
            };
            if values.insert(name.to_string(), value.clone()).is_some() {
                return Err(format!("flag --{name} given twice"));
            }
        }
        Ok(Flags { values })
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.values.get(name).map(String::as_str)
    }

    pub fn require(&self, name: &str) -> Result<&str, String> {
        self.get(name).ok_or_else(|| format!("missing required flag --{name}"))
    }

    pub fn require_parsed<T: FromStr>(&self, name: &str) -> Result<T, String> {
        parse(name, self.require(name)?)
    }

    pub fn parsed_or<T: FromStr>(&self, name: &str, default: T) -> Result<T, String> {
        match self.get(name) {
            Some(raw) => parse(name, raw),
            None => Ok(default),
        }
    }
}

fn parse<T: FromStr>(name: &str, raw: &str) -> Result<T, String> {
    raw.parse()
        .map_err(|_| format!("bad value {raw:?} for --{name}"))
}
