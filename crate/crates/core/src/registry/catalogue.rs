use std::collections::BTreeSet;
use std::sync::OnceLock;

use crate::kernel::build::dest_eq;
use crate::kernel::{Signature, Term};
use crate::softtypes::soft_signature;

use super::format::{parse_class_file, ClassFile};
use super::{Class, Feature, RResult, RegistryError};

/// Catalogue sources in load order, as `(file name, contents)`.
pub const BUILTIN_SOURCES: [(&str, &str); 8] = [
    ("opair.gst", include_str!("../../catalogue/opair.gst")),
    ("gzf.gst", include_str!("../../catalogue/gzf.gst")),
    ("ordinal.gst", include_str!("../../catalogue/ordinal.gst")),
    ("ordrec.gst", include_str!("../../catalogue/ordrec.gst")),
    ("function.gst", include_str!("../../catalogue/function.gst")),
    ("exception.gst", include_str!("../../catalogue/exception.gst")),
    ("tagging.gst", include_str!("../../catalogue/tagging.gst")),
    ("modelbase.gst", include_str!("../../catalogue/modelbase.gst")),
];

/// Classes and features, each class after its dependencies.
#[derive(Clone, Debug, Default)]
pub struct Catalogue {
    pub classes: Vec<Class>,
    pub features: Vec<Feature>,
}

impl Catalogue {
    pub fn new() -> Self {
        Catalogue::default()
    }

    /// Parses a file against the classes loaded so far and adds it.
    pub fn load(&mut self, src: &str, file: &str) -> RResult<&Class> {
        let parsed = parse_class_file(src, file, self)?;
        self.add(parsed)
    }

    pub fn add(&mut self, file: ClassFile) -> RResult<&Class> {
        if self.classes.iter().any(|c| c.name == file.class.name) {
            return Err(RegistryError::DuplicateClass(file.class.name));
        }
        if let Some(f) = file.feature {
            self.features.push(f);
        }
        self.classes.push(file.class);
        Ok(self.classes.last().unwrap())
    }

    /// A class by its own name or by the name of its feature.
    pub fn class(&self, name: &str) -> RResult<&Class> {
        let by_feature = self
            .features
            .iter()
            .find(|f| f.name == name)
            .map(|f| f.class.as_str());
        let key = self
            .classes
            .iter()
            .any(|c| c.name == name)
            .then_some(name)
            .or(by_feature)
            .ok_or_else(|| RegistryError::UnknownClass(name.to_owned()))?;
        self.classes
            .iter()
            .find(|c| c.name == key)
            .ok_or_else(|| RegistryError::UnknownClass(name.to_owned()))
    }

    pub fn feature(&self, name: &str) -> RResult<&Feature> {
        self.features
            .iter()
            .find(|f| f.name == name)
            .ok_or_else(|| RegistryError::UnknownFeature(name.to_owned()))
    }

    /// The feature whose class is `class`.
    pub fn feature_of_class(&self, class: &str) -> Option<&Feature> {
        self.features.iter().find(|f| f.class == class)
    }

    /// Classes reachable from `roots`, dependencies first, without repeats.
    pub fn closure(&self, roots: &[String]) -> RResult<Vec<&Class>> {
        let mut out: Vec<&Class> = Vec::new();
        let mut visiting = BTreeSet::new();
        fn go<'a>(
            cat: &'a Catalogue,
            name: &str,
            out: &mut Vec<&'a Class>,
            visiting: &mut BTreeSet<String>,
        ) -> RResult<()> {
            let c = cat.class(name)?;
            if out.iter().any(|d| d.name == c.name) {
                return Ok(());
            }
            if !visiting.insert(c.name.clone()) {
                return Err(RegistryError::Invalid {
                    class: c.name.clone(),
                    issues: "dependency cycle".into(),
                });
            }
            for d in &c.deps {
                go(cat, d, out, visiting)?;
            }
            visiting.remove(&c.name);
            out.push(c);
            Ok(())
        }
        for r in roots {
            go(self, r, &mut out, &mut visiting)?;
        }
        Ok(out)
    }

    /// The soft signature extended by the parameters and defined constants of
    /// `deps` and everything they depend on.
    pub fn signature_for_deps(&self, deps: &[String]) -> RResult<Signature> {
        let mut sig = soft_signature();
        for c in self.closure(deps)? {
            extend_with_class(&mut sig, c)?;
        }
        Ok(sig)
    }

    /// The signature a class's own formulas are checked in.
    pub fn signature_for(&self, name: &str) -> RResult<Signature> {
        self.signature_for_deps(&[self.class(name)?.name.clone()])
    }
}

pub(crate) fn extend_with_class(sig: &mut Signature, c: &Class) -> RResult<()> {
    for (n, t) in &c.params {
        sig.declare_compatible(n, t.clone())?;
    }
    for d in &c.defs {
        if let Some((Term::Const(n, t), _)) = dest_eq(d) {
            sig.declare_compatible(n, t.clone())?;
        }
    }
    Ok(())
}

/// The catalogue of all builtin classes, parsed once.
pub fn builtin_catalogue() -> &'static Catalogue {
    static CAT: OnceLock<Catalogue> = OnceLock::new();
    CAT.get_or_init(|| {
        let mut cat = Catalogue::new();
        for (file, src) in BUILTIN_SOURCES {
            cat.load(src, file)
                .unwrap_or_else(|e| panic!("builtin catalogue: {e}"));
        }
        cat
    })
}

/// GZF, Ordinal, OrdRec, Function, Exc and OPair, in that order.
pub fn builtin_features() -> Vec<Feature> {
    let cat = builtin_catalogue();
    ["GZF", "Ordinal", "OrdRec", "Function", "Exc", "OPair"]
        .iter()
        .map(|n| cat.feature(n).expect("builtin feature").clone())
        .collect()
}
