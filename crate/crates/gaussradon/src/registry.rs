//! Built-in registry of norm models, functionals, bodies, and path
//! functionals, selected by name plus a JSON parameter object.
//!
//! Experiments never run user code: every strategy is one of the entries
//! below, which keeps the bounded-evaluator contract enforceable. Entries
//! are stored in ordered maps so listings are stable.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::functional::{
    Constant, CoordinateBump, DiskBump, Functional, GaussianBump, LinearClamp, NormBump, NormShell,
    Probe,
};
use crate::hilbert::{ConvexBody, HVector};
use crate::norms::{EuclideanNorm, NormModel, WeightedL2};
use crate::wiener::{GridValueClamp, PathFunctional, SchauderBasis, SupClamp, WienerSupNorm};

/// Description of one registry entry for listings.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct EntryInfo {
    pub kind: &'static str,
    pub name: &'static str,
    pub summary: &'static str,
    pub params: &'static str,
}

type NormBuilder = fn(&Value) -> Result<Arc<dyn NormModel>>;
type FunctionalBuilder = fn(&Registry, &Value) -> Result<Arc<dyn Functional>>;
type BodyBuilder = fn(&Value) -> Result<ConvexBody>;
type PathFunctionalBuilder = fn(&SchauderBasis, &Value) -> Result<Arc<dyn PathFunctional>>;

struct NormEntry {
    info: EntryInfo,
    build: NormBuilder,
}

struct FunctionalEntry {
    info: EntryInfo,
    build: FunctionalBuilder,
}

struct BodyEntry {
    info: EntryInfo,
    build: BodyBuilder,
}

struct PathFunctionalEntry {
    info: EntryInfo,
    build: PathFunctionalBuilder,
}

/// Name-indexed strategy registry.
pub struct Registry {
    norms: BTreeMap<&'static str, NormEntry>,
    functionals: BTreeMap<&'static str, FunctionalEntry>,
    bodies: BTreeMap<&'static str, BodyEntry>,
    path_functionals: BTreeMap<&'static str, PathFunctionalEntry>,
}

impl Registry {
    /// The built-in strategies.
    pub fn builtin() -> Self {
        let mut r = Self {
            norms: BTreeMap::new(),
            functionals: BTreeMap::new(),
            bodies: BTreeMap::new(),
            path_functionals: BTreeMap::new(),
        };
        r.norms.insert(
            "weighted-l2",
            NormEntry {
                info: EntryInfo {
                    kind: "norm",
                    name: "weighted-l2",
                    summary: "geometric weighted l2 norm with analytic taming subspaces",
                    params: "{ratio: real in (0,1), default 0.25}",
                },
                build: |params| {
                    let ratio = opt_f64(params, "ratio")?.unwrap_or(0.25);
                    Ok(Arc::new(WeightedL2::new(ratio)?) as Arc<dyn NormModel>)
                },
            },
        );
        r.norms.insert(
            "wiener-sup",
            NormEntry {
                info: EntryInfo {
                    kind: "norm",
                    name: "wiener-sup",
                    summary:
                        "supremum norm of the Schauder path realization (statistical certificates)",
                    params: "{levels: integer 1..=20, default 8}",
                },
                build: |params| {
                    let levels = opt_u64(params, "levels")?.unwrap_or(8) as u32;
                    Ok(Arc::new(WienerSupNorm::new(SchauderBasis::new(levels)?))
                        as Arc<dyn NormModel>)
                },
            },
        );
        r.norms.insert(
            "h-norm",
            NormEntry {
                info: EntryInfo {
                    kind: "norm",
                    name: "h-norm",
                    summary:
                        "the Hilbert norm itself; certification fails by design (negative control)",
                    params: "{}",
                },
                build: |_| Ok(Arc::new(EuclideanNorm) as Arc<dyn NormModel>),
            },
        );

        r.functionals.insert(
            "const",
            FunctionalEntry {
                info: EntryInfo {
                    kind: "functional",
                    name: "const",
                    summary: "constant value",
                    params: "{value: real, default 1}",
                },
                build: |_, params| {
                    let value = opt_f64(params, "value")?.unwrap_or(1.0);
                    Ok(Arc::new(Constant(value)))
                },
            },
        );
        r.functionals.insert(
            "coordinate-clamp",
            FunctionalEntry {
                info: EntryInfo {
                    kind: "functional",
                    name: "coordinate-clamp",
                    summary: "clamp(<x, v>, lo, hi) for a fixed direction",
                    params: "{vector: [reals] or index: integer; lo, hi: reals, default -10, 10}",
                },
                build: |_, params| {
                    let direction = match opt_vector(params, "vector")? {
                        Some(v) => v,
                        None => HVector::basis(opt_u64(params, "index")?.unwrap_or(0) as usize),
                    };
                    Ok(Arc::new(LinearClamp {
                        direction,
                        lo: opt_f64(params, "lo")?.unwrap_or(-10.0),
                        hi: opt_f64(params, "hi")?.unwrap_or(10.0),
                    }))
                },
            },
        );
        r.functionals.insert(
            "cos-probe",
            FunctionalEntry {
                info: EntryInfo {
                    kind: "functional",
                    name: "cos-probe",
                    summary: "cos(t <v, x>), the real part of the exponential probe",
                    params: "{vector: [reals], t: real, default 1}",
                },
                build: |_, params| {
                    Ok(Arc::new(Probe {
                        direction: req_vector(params, "vector")?,
                        t: opt_f64(params, "t")?.unwrap_or(1.0),
                        imaginary: false,
                    }))
                },
            },
        );
        r.functionals.insert(
            "sin-probe",
            FunctionalEntry {
                info: EntryInfo {
                    kind: "functional",
                    name: "sin-probe",
                    summary: "sin(t <v, x>), the imaginary part of the exponential probe",
                    params: "{vector: [reals], t: real, default 1}",
                },
                build: |_, params| {
                    Ok(Arc::new(Probe {
                        direction: req_vector(params, "vector")?,
                        t: opt_f64(params, "t")?.unwrap_or(1.0),
                        imaginary: true,
                    }))
                },
            },
        );
        r.functionals.insert(
            "gaussian-bump",
            FunctionalEntry {
                info: EntryInfo {
                    kind: "functional",
                    name: "gaussian-bump",
                    summary: "exp(-|x_prefix - center|^2 / (2 sigma^2))",
                    params: "{center: [reals], sigma: real, default 1}",
                },
                build: |_, params| {
                    let center_raw = req_dense(params, "center")?;
                    Ok(Arc::new(GaussianBump {
                        dim: center_raw.len(),
                        center: HVector::from_dense(&center_raw),
                        sigma: opt_f64(params, "sigma")?.unwrap_or(1.0),
                    }))
                },
            },
        );
        r.functionals.insert(
            "coordinate-bump",
            FunctionalEntry {
                info: EntryInfo {
                    kind: "functional",
                    name: "coordinate-bump",
                    summary: "product of quartic bumps (1 - u_i^2)^2 per coordinate",
                    params: "{center: [reals], width: real, default 1}",
                },
                build: |_, params| {
                    let center_raw = req_dense(params, "center")?;
                    Ok(Arc::new(CoordinateBump {
                        indices: (0..center_raw.len()).collect(),
                        center: HVector::from_dense(&center_raw),
                        width: opt_f64(params, "width")?.unwrap_or(1.0),
                    }))
                },
            },
        );
        r.functionals.insert(
            "norm-bump",
            FunctionalEntry {
                info: EntryInfo {
                    kind: "functional",
                    name: "norm-bump",
                    summary: "clamp(1 - |x - center|/scale, 0, 1) in a model norm; Lipschitz with declared modulus",
                    params: "{center: [reals], scale: real, norm: {name, params}}",
                },
                build: |registry, params| {
                    let center = req_vector(params, "center")?;
                    let scale = opt_f64(params, "scale")?.unwrap_or(1.0);
                    let norm = registry.norm_from_spec(params.get("norm"))?;
                    Ok(Arc::new(NormBump::new(center, scale, norm)))
                },
            },
        );
        r.functionals.insert(
            "norm-shell",
            FunctionalEntry {
                info: EntryInfo {
                    kind: "functional",
                    name: "norm-shell",
                    summary: "ramp from 0 inside the r0-ball (model norm) to 1 at r0 + width; vanishes near its center",
                    params: "{center: [reals], r0: real, width: real, norm: {name, params}}",
                },
                build: |registry, params| {
                    let center = req_vector(params, "center")?;
                    let r0 = opt_f64(params, "r0")?.unwrap_or(0.05);
                    let width = opt_f64(params, "width")?.unwrap_or(0.05);
                    let norm = registry.norm_from_spec(params.get("norm"))?;
                    Ok(Arc::new(NormShell::new(center, r0, width, norm)))
                },
            },
        );
        r.functionals.insert(
            "disk-bump",
            FunctionalEntry {
                info: EntryInfo {
                    kind: "functional",
                    name: "disk-bump",
                    summary:
                        "(1 - |z - c|^2/r^2)^2 on the first two coordinates, zero off the disk",
                    params: "{center: [cx, cy], default origin; radius: real, default 1}",
                },
                build: |_, params| {
                    let c = opt_dense(params, "center")?.unwrap_or_else(|| vec![0.0, 0.0]);
                    if c.len() != 2 {
                        return Err(Error::InvalidParameter {
                            name: "center",
                            reason: "disk-bump center must have exactly two coordinates".into(),
                        });
                    }
                    Ok(Arc::new(DiskBump {
                        center: (c[0], c[1]),
                        radius: opt_f64(params, "radius")?.unwrap_or(1.0),
                    }))
                },
            },
        );

        r.bodies.insert(
            "ball",
            BodyEntry {
                info: EntryInfo {
                    kind: "body",
                    name: "ball",
                    summary: "closed ball",
                    params: "{center: [reals], default origin; radius: positive real}",
                },
                build: |params| {
                    let center = opt_vector(params, "center")?.unwrap_or_else(HVector::zero);
                    let radius = opt_f64(params, "radius")?.unwrap_or(1.0);
                    ConvexBody::ball(center, radius)
                },
            },
        );
        r.bodies.insert(
            "hull",
            BodyEntry {
                info: EntryInfo {
                    kind: "body",
                    name: "hull",
                    summary: "convex hull of finitely many points",
                    params: "{points: [[reals], ...]}",
                },
                build: |params| {
                    let raw = params.get("points").ok_or(Error::InvalidParameter {
                        name: "points",
                        reason: "hull requires a points array".into(),
                    })?;
                    let rows = raw.as_array().ok_or(Error::InvalidParameter {
                        name: "points",
                        reason: "points must be an array of coordinate arrays".into(),
                    })?;
                    let mut points = Vec::with_capacity(rows.len());
                    for row in rows {
                        points.push(HVector::from_dense(&dense_from_value(row, "points")?));
                    }
                    ConvexBody::hull(points)
                },
            },
        );

        r.path_functionals.insert(
            "path-value-clamp",
            PathFunctionalEntry {
                info: EntryInfo {
                    kind: "path-functional",
                    name: "path-value-clamp",
                    summary: "clamp(path(t), lo, hi) at a dyadic time t = num / 2^k",
                    params: "{num: integer, k: integer; lo, hi: reals, default -10, 10}",
                },
                build: |basis, params| {
                    let num = opt_u64(params, "num")?.unwrap_or(1) as usize;
                    let k = opt_u64(params, "k")?.unwrap_or(0) as u32;
                    Ok(Arc::new(GridValueClamp {
                        grid_index: basis.grid_index(num, k)?,
                        lo: opt_f64(params, "lo")?.unwrap_or(-10.0),
                        hi: opt_f64(params, "hi")?.unwrap_or(10.0),
                    }))
                },
            },
        );
        r.path_functionals.insert(
            "path-sup-clamp",
            PathFunctionalEntry {
                info: EntryInfo {
                    kind: "path-functional",
                    name: "path-sup-clamp",
                    summary: "min(sup |path|, hi)",
                    params: "{hi: real, default 10}",
                },
                build: |_, params| {
                    Ok(Arc::new(SupClamp {
                        hi: opt_f64(params, "hi")?.unwrap_or(10.0),
                    }))
                },
            },
        );
        r
    }

    pub fn norm(&self, name: &str, params: &Value) -> Result<Arc<dyn NormModel>> {
        let entry = self
            .norms
            .get(name)
            .ok_or_else(|| Error::UnknownRegistryEntry {
                kind: "norm",
                name: name.to_owned(),
            })?;
        (entry.build)(params)
    }

    /// Builds a norm model from a `{name, params}` spec value; a missing spec
    /// defaults to `weighted-l2` with default parameters.
    pub fn norm_from_spec(&self, spec: Option<&Value>) -> Result<Arc<dyn NormModel>> {
        match spec {
            None => self.norm("weighted-l2", &Value::Null),
            Some(v) => {
                let name = v
                    .get("name")
                    .and_then(Value::as_str)
                    .ok_or_else(|| Error::Config("norm spec needs a `name` field".into()))?;
                let default = Value::Null;
                self.norm(name, v.get("params").unwrap_or(&default))
            }
        }
    }

    pub fn functional(&self, name: &str, params: &Value) -> Result<Arc<dyn Functional>> {
        let entry = self
            .functionals
            .get(name)
            .ok_or_else(|| Error::UnknownRegistryEntry {
                kind: "functional",
                name: name.to_owned(),
            })?;
        (entry.build)(self, params)
    }

    pub fn body(&self, name: &str, params: &Value) -> Result<ConvexBody> {
        let entry = self
            .bodies
            .get(name)
            .ok_or_else(|| Error::UnknownRegistryEntry {
                kind: "body",
                name: name.to_owned(),
            })?;
        (entry.build)(params)
    }

    pub fn path_functional(
        &self,
        basis: &SchauderBasis,
        name: &str,
        params: &Value,
    ) -> Result<Arc<dyn PathFunctional>> {
        let entry = self
            .path_functionals
            .get(name)
            .ok_or_else(|| Error::UnknownRegistryEntry {
                kind: "path-functional",
                name: name.to_owned(),
            })?;
        (entry.build)(basis, params)
    }

    /// Stable listing of every entry, grouped by kind.
    pub fn listing(&self) -> Vec<EntryInfo> {
        let mut out = Vec::new();
        out.extend(self.norms.values().map(|e| e.info));
        out.extend(self.functionals.values().map(|e| e.info));
        out.extend(self.bodies.values().map(|e| e.info));
        out.extend(self.path_functionals.values().map(|e| e.info));
        out
    }
}

fn opt_f64(params: &Value, name: &'static str) -> Result<Option<f64>> {
    match params.get(name) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => v
            .as_f64()
            .filter(|x| x.is_finite())
            .map(Some)
            .ok_or(Error::InvalidParameter {
                name,
                reason: format!("expected a finite number, got {v}"),
            }),
    }
}

fn opt_u64(params: &Value, name: &'static str) -> Result<Option<u64>> {
    match params.get(name) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => v.as_u64().map(Some).ok_or(Error::InvalidParameter {
            name,
            reason: format!("expected a non-negative integer, got {v}"),
        }),
    }
}

fn dense_from_value(v: &Value, name: &'static str) -> Result<Vec<f64>> {
    let arr = v.as_array().ok_or(Error::InvalidParameter {
        name,
        reason: format!("expected an array of numbers, got {v}"),
    })?;
    arr.iter()
        .map(|x| {
            x.as_f64()
                .filter(|y| y.is_finite())
                .ok_or(Error::InvalidParameter {
                    name,
                    reason: format!("expected a finite number, got {x}"),
                })
        })
        .collect()
}

fn opt_dense(params: &Value, name: &'static str) -> Result<Option<Vec<f64>>> {
    match params.get(name) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => dense_from_value(v, name).map(Some),
    }
}

fn req_dense(params: &Value, name: &'static str) -> Result<Vec<f64>> {
    opt_dense(params, name)?.ok_or(Error::InvalidParameter {
        name,
        reason: "required parameter is missing".into(),
    })
}

fn opt_vector(params: &Value, name: &'static str) -> Result<Option<HVector>> {
    Ok(opt_dense(params, name)?.map(|d| HVector::from_dense(&d)))
}

fn req_vector(params: &Value, name: &'static str) -> Result<HVector> {
    Ok(HVector::from_dense(&req_dense(params, name)?))
}
