use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use twophoton::config::{DetectorConfig, Preset};

use crate::io::CliError;

/// A detector given either in full or as a preset with overrides.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorSource {
    #[serde(default)]
    pub preset: Option<Preset>,
    /// Keys of the detector schema replacing preset values.
    #[serde(default)]
    pub overrides: Map<String, Value>,
    #[serde(default)]
    pub parameters: Option<DetectorConfig>,
}

impl DetectorSource {
    pub fn resolve(&self) -> Result<DetectorConfig, CliError> {
        match (&self.preset, &self.parameters) {
            (Some(p), None) => {
                let mut v = serde_json::to_value(p.config()).expect("presets serialize");
                let obj = v.as_object_mut().expect("detector is an object");
                for (k, x) in &self.overrides {
                    obj.insert(k.clone(), x.clone());
                }
                serde_json::from_value(v).map_err(|e| CliError::config(format!("overrides: {e}")))
            }
            (None, Some(d)) if self.overrides.is_empty() => Ok(d.clone()),
            (None, Some(_)) => Err(CliError::config("overrides apply only to a preset")),
            _ => Err(CliError::config(
                "give exactly one of \"preset\" and \"parameters\"",
            )),
        }
    }
}
