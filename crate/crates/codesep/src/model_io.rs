//! Plain-text model dumps, one `key values...` line per field.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use codesep_core::classifiers::{ClassifierKind, ModelParams, Scaler, TrainedModel};
use codesep_core::Matrix;

use crate::error::{Error, Result};

pub const MODEL_HEADER: &str = "codesep-model";
pub const MODEL_VERSION: u32 = 1;

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

pub fn model_to_string(model: &TrainedModel) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{MODEL_HEADER} {MODEL_VERSION}");
    let _ = writeln!(s, "kind {}", model.kind.name());
    let _ = writeln!(s, "dim {}", model.dim);
    let _ = writeln!(s, "classes {}", model.classes);
    let _ = writeln!(s, "mean {}", join(&model.scaler.mean));
    let _ = writeln!(s, "std {}", join(&model.scaler.std));
    match &model.params {
        ModelParams::Knn { k, data, labels } => {
            let _ = writeln!(s, "k {k}");
            let _ = writeln!(s, "samples {}", data.cols());
            let _ = writeln!(s, "labels {}", join(labels));
            let _ = writeln!(s, "data {}", join(data.as_slice()));
        }
        ModelParams::Linear { weights, bias } => {
            let _ = writeln!(s, "bias {}", join(bias));
            let _ = writeln!(s, "weights {}", join(weights));
        }
    }
    s
}

struct Lines<'a> {
    iter: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn field(&mut self, key: &str) -> Result<(usize, &'a str)> {
        let (i, line) = self.iter.next().ok_or(Error::Model {
            line: 0,
            detail: format!("missing `{key}`"),
        })?;
        let (k, rest) = line.split_once(' ').unwrap_or((line, ""));
        if k != key {
            return Err(Error::Model {
                line: i + 1,
                detail: format!("expected `{key}`, found `{k}`"),
            });
        }
        Ok((i + 1, rest))
    }

    fn one<T: std::str::FromStr>(&mut self, key: &str) -> Result<T> {
        let (line, v) = self.field(key)?;
        v.trim().parse().map_err(|_| Error::Model {
            line,
            detail: format!("bad `{key}` value `{v}`"),
        })
    }

    fn many<T: std::str::FromStr>(&mut self, key: &str, len: usize) -> Result<Vec<T>> {
        let (line, v) = self.field(key)?;
        let out = v
            .split_whitespace()
            .map(|t| {
                t.parse().map_err(|_| Error::Model {
                    line,
                    detail: format!("bad number `{t}`"),
                })
            })
            .collect::<Result<Vec<T>>>()?;
        if out.len() != len {
            return Err(Error::Model {
                line,
                detail: format!("`{key}` has {} values, expected {len}", out.len()),
            });
        }
        Ok(out)
    }
}

pub fn model_from_str(text: &str) -> Result<TrainedModel> {
    let mut lines = Lines {
        iter: text.lines().enumerate(),
    };
    let version: u32 = lines.one(MODEL_HEADER)?;
    if version != MODEL_VERSION {
        return Err(Error::Model {
            line: 1,
            detail: format!("unsupported version {version}"),
        });
    }
    let kind: String = lines.one("kind")?;
    let kind: ClassifierKind = kind.parse()?;
    let dim: usize = lines.one("dim")?;
    let classes: usize = lines.one("classes")?;
    let scaler = Scaler {
        mean: lines.many("mean", dim)?,
        std: lines.many("std", dim)?,
    };
    let params = match kind {
        ClassifierKind::Knn => {
            let k = lines.one("k")?;
            let m: usize = lines.one("samples")?;
            let labels = lines.many("labels", m)?;
            let data = Matrix::from_col_major(dim, m, lines.many("data", dim * m)?)?;
            ModelParams::Knn { k, data, labels }
        }
        ClassifierKind::LogReg | ClassifierKind::LinearSvm => {
            let bias = lines.many("bias", classes)?;
            let weights = lines.many("weights", classes * dim)?;
            ModelParams::Linear { weights, bias }
        }
    };
    Ok(TrainedModel {
        kind,
        dim,
        classes,
        scaler,
        params,
    })
}

pub fn save_model(path: impl AsRef<Path>, model: &TrainedModel) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, model_to_string(model)).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<TrainedModel> {
    let path = path.as_ref();
    model_from_str(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use codesep_core::classifiers::{train, ClassifierSpec};
    use codesep_core::datagen::{generate, GeneratorSpec, Shape};

    #[test]
    fn round_trips_every_kind() {
        let x = generate(&GeneratorSpec::new(Shape::Moons, 15, 1)).unwrap();
        for spec in [
            ClassifierSpec::knn(3),
            ClassifierSpec::log_reg(),
            ClassifierSpec::linear_svm(0.5),
        ] {
            let model = train(&spec, &x).unwrap();
            assert_eq!(model_from_str(&model_to_string(&model)).unwrap(), model);
        }
    }

    #[test]
    fn rejects_wrong_version_and_lengths() {
        assert!(model_from_str("codesep-model 2\n").is_err());
        let text = "codesep-model 1\nkind log_reg\ndim 2\nclasses 2\nmean 0 0\nstd 1\n";
        assert!(matches!(model_from_str(text), Err(Error::Model { line: 6, .. })));
    }
}
