use serde::{Deserialize, Serialize};

use crate::error::{Result, SpxError};
use crate::layout::Layout;

/// `{"n": 3, "coords": [[x, y], ...]}`. Unknown fields are ignored on read,
/// so richer documents that embed a layout (such as sweep results) load too.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutFile {
    pub n: usize,
    pub coords: Vec<[f64; 2]>,
}

impl From<&Layout> for LayoutFile {
    fn from(l: &Layout) -> Self {
        LayoutFile {
            n: l.n(),
            coords: l.coords.clone(),
        }
    }
}

pub fn parse_layout(text: &str) -> Result<Layout> {
    let file: LayoutFile = serde_json::from_str(text).map_err(|e| SpxError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if file.coords.len() != file.n {
        return Err(SpxError::InvalidArgument(format!(
            "layout declares n={} but has {} coordinates",
            file.n,
            file.coords.len()
        )));
    }
    Layout::new(file.coords)
}

pub fn write_layout(layout: &Layout) -> String {
    serde_json::to_string_pretty(&LayoutFile::from(layout)).expect("layout serializes")
}
