//! Versioned JSON envelope for persisted artefacts: trained models, pools,
//! META-DES meta-models and recommenders.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::learners::TrainedModel;
use crate::pool::Pool;
use crate::recommender::Recommender;
use crate::selection::MetaDesModel;

pub const REGISTRY_FORMAT: &str = "mlrs-registry";
pub const REGISTRY_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum Artifact {
    Model(TrainedModel),
    Pool(Pool),
    MetaDes(MetaDesModel),
    Recommender(Recommender),
}

impl Artifact {
    pub fn kind(&self) -> &'static str {
        match self {
            Artifact::Model(_) => "model",
            Artifact::Pool(_) => "pool",
            Artifact::MetaDes(_) => "meta_des",
            Artifact::Recommender(_) => "recommender",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub format: String,
    pub version: u32,
    #[serde(flatten)]
    pub artifact: Artifact,
}

pub fn to_json(artifact: &Artifact) -> Result<String> {
    let env = Envelope {
        format: REGISTRY_FORMAT.into(),
        version: REGISTRY_VERSION,
        artifact: artifact.clone(),
    };
    Ok(serde_json::to_string_pretty(&env)?)
}

pub fn from_json(text: &str) -> Result<Artifact> {
    #[derive(Deserialize)]
    struct Header {
        format: String,
        version: u32,
    }
    let h: Header = serde_json::from_str(text)?;
    if h.format != REGISTRY_FORMAT {
        return Err(Error::Registry(format!("unknown format {:?}", h.format)));
    }
    if h.version != REGISTRY_VERSION {
        return Err(Error::Registry(format!(
            "version {} not supported (expected {REGISTRY_VERSION})",
            h.version
        )));
    }
    let env: Envelope = serde_json::from_str(text)?;
    Ok(env.artifact)
}

pub fn save(artifact: &Artifact, path: &Path) -> Result<()> {
    fs::write(path, to_json(artifact)?).map_err(|e| Error::io(path, e))
}

pub fn load(path: &Path) -> Result<Artifact> {
    from_json(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
}

pub fn load_recommender(path: &Path) -> Result<Recommender> {
    match load(path)? {
        Artifact::Recommender(r) => Ok(r),
        other => Err(Error::Registry(format!(
            "{} holds a {}, not a recommender",
            path.display(),
            other.kind()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Matrix;
    use crate::learners::train_gaussian_nb;

    #[test]
    fn round_trip_and_version_check() {
        let x = Matrix::from_rows(&[vec![0.0], vec![0.2], vec![1.0], vec![1.3]]);
        let a = Artifact::Model(TrainedModel::GaussianNb(train_gaussian_nb(
            &x,
            &[0, 0, 1, 1],
            2,
        )));
        let text = to_json(&a).unwrap();
        assert_eq!(from_json(&text).unwrap(), a);
        let bumped = text.replace("\"version\": 1", "\"version\": 99");
        assert!(matches!(from_json(&bumped), Err(Error::Registry(_))));
    }
}
