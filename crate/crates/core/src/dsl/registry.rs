use super::{parse_model, Model};
use crate::error::{Error, Result};

/// Built-in models by name.
pub const REGISTRY: &[(&str, &str)] = &[
    ("iwasawa", include_str!("../../models/iwasawa.balg")),
    ("nakamura-i", include_str!("../../models/nakamura-i.balg")),
    ("nakamura-ii", include_str!("../../models/nakamura-ii.balg")),
];

pub fn registry(name: &str) -> Result<Model> {
    let (_, src) = REGISTRY
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::UnknownModel(name.to_string()))?;
    parse_model(src)
}
