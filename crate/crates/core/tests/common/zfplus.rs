use gst_core::kernel::sexp::parse;
use gst_core::kernel::{Signature, Term};
use gst_core::registry::builtin_catalogue;
use gst_core::softtypes::notation::Elaborator;

pub fn zf_sig() -> Signature {
    let deps: Vec<String> = ["GZF", "Ordinal", "Function", "Exception"]
        .map(String::from)
        .to_vec();
    builtin_catalogue().signature_for_deps(&deps).unwrap()
}

pub fn read(sig: &Signature, src: &str) -> Term {
    Elaborator::new(sig).term(&parse(src).unwrap(), 1).unwrap()
}

pub fn fixture() -> Vec<(String, Term)> {
    let sig = zf_sig();
    include_str!("../fixtures/zfplus_axioms.txt")
        .lines()
        .filter(|l| !l.starts_with(';') && !l.trim().is_empty())
        .map(|l| {
            let (label, src) = l.split_once(' ').unwrap();
            (label.to_owned(), read(&sig, src))
        })
        .collect()
}

