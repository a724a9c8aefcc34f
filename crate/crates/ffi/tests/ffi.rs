use std::ffi::{CStr, CString};
use std::ptr;

use vgrp_ffi::*;

fn last_error() -> String {
    let p = vgrp_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

unsafe fn boolean() -> *mut VgrpQuantale {
    let mut q = ptr::null_mut();
    assert_eq!(vgrp_quantale_builtin(VgrpQuantaleKind::Boolean, 0, &mut q), VgrpStatus::Ok);
    q
}

unsafe fn cyclic(q: *const VgrpQuantale, delta: &[u16]) -> *mut VgrpObject {
    let mut g = ptr::null_mut();
    assert_eq!(vgrp_object_cyclic(q, delta.len(), delta.as_ptr(), &mut g), VgrpStatus::Ok);
    g
}

#[test]
fn z4_example_through_handles() {
    unsafe {
        let q = boolean();
        // boolean labels: 0 = bot, 1 = top.
        let x = cyclic(q, &[1, 0, 1, 0]);
        let y = cyclic(q, &[1, 0]);

        let mut class = VgrpObjectClass::default();
        assert_eq!(vgrp_object_classify(x, &mut class), VgrpStatus::Ok);
        assert!(class.symmetric && !class.separated && !class.indiscrete);

        let mut buf = [0usize; 4];
        let mut len = 0;
        assert_eq!(vgrp_object_torsion_part(x, buf.as_mut_ptr(), buf.len(), &mut len), VgrpStatus::Ok);
        assert_eq!(&buf[..len], &[0, 2]);
        assert_eq!(vgrp_object_torsion_part(x, buf.as_mut_ptr(), 1, &mut len), VgrpStatus::Input);
        assert_eq!(len, 2);

        let map = [0usize, 1, 0, 1];
        let mut f = ptr::null_mut();
        assert_eq!(vgrp_hom_new(x, y, map.as_ptr(), map.len(), &mut f), VgrpStatus::Ok);
        let mut covering = true;
        assert_eq!(vgrp_hom_is_covering(f, &mut covering), VgrpStatus::Ok);
        assert!(!covering);
        let mut mc = VgrpMorphismClass::default();
        assert_eq!(vgrp_hom_classify(f, &mut mc), VgrpStatus::Ok);
        assert!(mc.in_e && mc.in_e_prime && !mc.in_m && !mc.in_m_star && !mc.covering);

        vgrp_hom_free(f);
        vgrp_object_free(x);
        vgrp_object_free(y);
        vgrp_quantale_free(q);
    }
}

#[test]
fn errors_map_to_status_codes() {
    unsafe {
        let q = boolean();
        let mut g = ptr::null_mut();
        // delta(1) = top but delta(2) = bot breaks transitivity.
        let bad = [1u16, 1, 0, 0];
        assert_eq!(vgrp_object_cyclic(q, 4, bad.as_ptr(), &mut g), VgrpStatus::TheoremCheck);
        assert!(g.is_null());
        assert!(last_error().contains("violates"));

        let mut size = 0;
        assert_eq!(vgrp_object_size(ptr::null(), &mut size), VgrpStatus::NullPointer);
        assert!(last_error().contains("null"));

        let x = cyclic(q, &[1, 0, 1, 0]);
        let y = cyclic(q, &[1, 0]);
        let map = [0usize, 1, 1, 0];
        let mut f = ptr::null_mut();
        assert_eq!(vgrp_hom_new(x, y, map.as_ptr(), 4, &mut f), VgrpStatus::TheoremCheck);
        let map = [0usize, 1, 0, 7];
        assert_eq!(vgrp_hom_new(x, y, map.as_ptr(), 4, &mut f), VgrpStatus::Input);
        vgrp_object_free(x);
        vgrp_object_free(y);

        let mut chain = ptr::null_mut();
        assert_eq!(vgrp_quantale_builtin(VgrpQuantaleKind::LawvereChain, 0, &mut chain), VgrpStatus::Input);
        assert_eq!(vgrp_quantale_builtin(VgrpQuantaleKind::LawvereChain, 3, &mut chain), VgrpStatus::Ok);
        assert_eq!(vgrp_quantale_size(chain, &mut size), VgrpStatus::Ok);
        assert_eq!(size, 4);
        vgrp_quantale_free(chain);
        vgrp_quantale_free(q);
    }
}

#[test]
fn documents_and_the_run_entry_point() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/z4_boolean.json");
    let text = CString::new(std::fs::read_to_string(path).unwrap()).unwrap();
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(vgrp_object_from_document(text.as_ptr(), &mut g), VgrpStatus::Ok);
        let mut size = 0;
        assert_eq!(vgrp_object_size(g, &mut size), VgrpStatus::Ok);
        assert_eq!(size, 4);
        vgrp_object_free(g);

        let args = CString::new(serde_json::json!(["--format", "json", "decompose", "--input", path]).to_string()).unwrap();
        let (mut out, mut code) = (ptr::null_mut(), -1);
        assert_eq!(vgrp_run_json(args.as_ptr(), &mut out, &mut code), VgrpStatus::Ok);
        assert_eq!(code, 0);
        let golden = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/golden/z4_boolean.decompose.json");
        assert_eq!(CStr::from_ptr(out).to_str().unwrap(), std::fs::read_to_string(golden).unwrap());
        vgrp_string_free(out);

        let args = CString::new("[\"classify\", \"--input\", \"/nonexistent.json\"]").unwrap();
        assert_eq!(vgrp_run_json(args.as_ptr(), &mut out, &mut code), VgrpStatus::Ok);
        assert_eq!(code, 2);
        assert!(last_error().starts_with("error:"));
        vgrp_string_free(out);

        let args = CString::new("not json").unwrap();
        assert_eq!(vgrp_run_json(args.as_ptr(), &mut out, &mut code), VgrpStatus::Input);
        assert_eq!(vgrp_run_json(ptr::null(), &mut out, &mut code), VgrpStatus::NullPointer);
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/vgrp.h")).unwrap();
    for name in [
        "vgrp_last_error",
        "vgrp_string_free",
        "vgrp_quantale_builtin",
        "vgrp_object_cyclic",
        "vgrp_object_from_document",
        "vgrp_object_torsion_part",
        "vgrp_hom_new",
        "vgrp_hom_classify",
        "vgrp_run_json",
        "typedef struct VgrpObject VgrpObject",
        "VGRP_STATUS_NULL_POINTER = 4",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}
