//! Taxonomy override files.
//!
//! A TOML document with up to four flat tables, applied in this order:
//!
//! ```toml
//! [sector]            # status group -> Scientific | Educational | Professional
//! Librarian = "Educational"
//!
//! [user_type]         # status group -> free-text user type
//! Lecturer = "Lecturer"
//!
//! [alias]             # legacy status group -> canonical status group
//! AssistantProfessor = "Lecturer"
//!
//! [groups]            # name -> target-group expression (may use earlier entries)
//! TEACH = "Lecturer+SeniorLecturer+Professor"
//! ```
//!
//! Status groups are written by identifier (`StudentBachelor`, `PostDoc`, ...).

use std::path::Path;

use mnrs_core::{Sector, StatusGroup, TaxonomyOverride};
use toml::{Table, Value};

use crate::error::{Error, Result};

pub fn read_override(path: &Path) -> Result<TaxonomyOverride> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_override(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

pub fn parse_override(text: &str) -> Result<TaxonomyOverride> {
    let doc: Table = text
        .parse()
        .map_err(|e: toml::de::Error| Error::Format(e.message().to_string()))?;
    let mut ov = TaxonomyOverride::default();
    for (section, body) in &doc {
        let Value::Table(entries) = body else {
            return Err(Error::Format(format!("`{section}` must be a table")));
        };
        for (key, value) in entries {
            let Value::String(value) = value else {
                return Err(Error::Format(format!("{section}.{key}: expected a string")));
            };
            match section.as_str() {
                "sector" => {
                    let s = Sector::parse(value).ok_or_else(|| {
                        Error::Format(format!("{section}.{key}: unknown sector `{value}`"))
                    })?;
                    ov.sectors.push((status(section, key)?, s));
                }
                "user_type" => ov.user_types.push((status(section, key)?, value.clone())),
                "alias" => ov
                    .aliases
                    .push((status(section, key)?, status(section, value)?)),
                "groups" => ov.groups.push((key.clone(), value.clone())),
                other => return Err(Error::Format(format!("unknown section `{other}`"))),
            }
        }
    }
    Ok(ov)
}

fn status(section: &str, name: &str) -> Result<StatusGroup> {
    StatusGroup::from_name(name)
        .ok_or_else(|| Error::Format(format!("{section}: unknown status group `{name}`")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use mnrs_core::{builtin_sector_map, CountChannel};

    #[test]
    fn parse_and_apply() {
        let ov = parse_override(
            r#"
[sector]
Librarian = "Educational"
[alias]
AssistantProfessor = "Lecturer"
[groups]
TEACH = "Lecturer+SeniorLecturer"
WIDE = "TEACH"
"#,
        )
        .unwrap();
        let mut m = builtin_sector_map();
        let notices = m.apply(&ov).unwrap();
        assert_eq!(notices.len(), 2);
        assert_eq!(m.sector_of(StatusGroup::Librarian), Sector::Educational);
        let teach: mnrs_core::StatusSet = [StatusGroup::Lecturer, StatusGroup::SeniorLecturer]
            .into_iter()
            .collect();
        assert_eq!(
            m.resolve("WIDE").unwrap().channel,
            CountChannel::Readers(teach)
        );
    }

    #[test]
    fn errors() {
        assert!(parse_override("[sector]\nLibrarian = \"Martial\"").is_err());
        assert!(parse_override("[sector]\nAstronaut = \"Scientific\"").is_err());
        assert!(parse_override("[colors]\nx = \"y\"").is_err());
        assert!(parse_override("sector = 3").is_err());
        assert!(parse_override("[groups]\nX = 3").is_err());
    }
}
