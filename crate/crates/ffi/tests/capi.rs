use std::ffi::{CStr, CString};
use std::ptr;

use blocksens_ffi::*;

fn table(text: &str) -> *mut BsTruthTable {
    let text = CString::new(text).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { bs_table_from_text(text.as_ptr(), &mut out) }, BsStatus::Ok);
    out
}

fn last_error() -> String {
    let p = bs_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn measures_through_handles() {
    let t = table("n=2\n0111");
    let (mut n, mut v, mut w, mut bit) = (0u32, 0u32, 0u64, false);
    unsafe {
        assert_eq!(bs_table_arity(t, &mut n), BsStatus::Ok);
        assert_eq!(n, 2);
        assert_eq!(bs_table_eval(t, 2, &mut bit), BsStatus::Ok);
        assert!(bit);
        assert_eq!(bs_sensitivity(t, &mut v, &mut w), BsStatus::Ok);
        assert_eq!((v, w), (2, 0));
        assert_eq!(bs_block_sensitivity(t, &mut v, &mut w), BsStatus::Ok);
        assert_eq!((v, w), (2, 0));
        assert_eq!(bs_block_sensitivity_at(t, 3, &mut v), BsStatus::Ok);
        assert_eq!(v, 1);
        bs_table_free(t);
    }
}

#[test]
fn families() {
    let mut t = ptr::null_mut();
    let (mut v, mut w) = (0u32, 0u64);
    unsafe {
        assert_eq!(bs_virza_table(1, &mut t), BsStatus::Ok);
        assert_eq!(bs_sensitivity(t, &mut v, &mut w), BsStatus::Ok);
        assert_eq!(v, 3);
        assert_eq!(bs_block_sensitivity_at(t, 0, &mut v), BsStatus::Ok);
        assert_eq!(v, 6);
        bs_table_free(t);

        assert_eq!(bs_rubinstein_table(2, &mut t), BsStatus::Ok);
        assert_eq!(bs_block_sensitivity(t, &mut v, &mut w), BsStatus::Ok);
        assert_eq!(v, 2);
        bs_table_free(t);

        assert_eq!(bs_virza_table(2, &mut t), BsStatus::Capacity);
        assert_eq!(bs_rubinstein_table(3, &mut t), BsStatus::InvalidArgument);
    }
}

#[test]
fn instances_and_dimacs() {
    let parts = [2u32, 1, 1];
    let mut inst = ptr::null_mut();
    let (mut vars, mut clauses) = (0usize, 0usize);
    let mut text = ptr::null_mut();
    unsafe {
        assert_eq!(bs_instance_build(4, 2, parts.as_ptr(), parts.len(), &mut inst), BsStatus::Ok);
        assert_eq!(bs_instance_var_count(inst, &mut vars), BsStatus::Ok);
        assert_eq!(bs_instance_clause_count(inst, &mut clauses), BsStatus::Ok);
        assert_eq!(bs_instance_dimacs(inst, &mut text), BsStatus::Ok);
        let dimacs = CStr::from_ptr(text).to_str().unwrap().to_owned();
        assert!(dimacs.contains(&format!("p cnf {vars} {clauses}\n")));
        bs_string_free(text);
        bs_instance_free(inst);

        assert_eq!(bs_instance_build(3, 1, ptr::null(), 0, &mut inst), BsStatus::Ok);
        bs_instance_free(inst);

        let bad = [1u32, 2];
        assert_eq!(bs_instance_build(3, 1, bad.as_ptr(), 2, &mut inst), BsStatus::InvalidArgument);
        assert_eq!(bs_instance_build(15, 1, ptr::null(), 0, &mut inst), BsStatus::Capacity);
    }
}

#[test]
fn errors_are_reported() {
    let mut out = ptr::null_mut();
    let bad = CString::new("n=2\n01").unwrap();
    unsafe {
        assert_eq!(bs_table_from_text(bad.as_ptr(), &mut out), BsStatus::Parse);
        assert!(out.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(bs_table_from_text(ptr::null(), &mut out), BsStatus::NullPointer);
        assert!(last_error().contains("null"));

        let bits = [0u8, 1, 2, 1];
        assert_eq!(bs_table_from_bits(2, bits.as_ptr(), 4, &mut out), BsStatus::InvalidArgument);
        let bits = [0u8, 1, 1, 1];
        assert_eq!(bs_table_from_bits(2, bits.as_ptr(), 4, &mut out), BsStatus::Ok);
        let mut bit = false;
        assert_eq!(bs_table_eval(out, 4, &mut bit), BsStatus::InvalidArgument);
        assert_eq!(bs_table_arity(out, ptr::null_mut()), BsStatus::NullPointer);
        assert_eq!(bs_table_arity(ptr::null(), ptr::null_mut()), BsStatus::NullPointer);
        bs_table_free(out);
        bs_table_free(ptr::null_mut());
        bs_string_free(ptr::null_mut());
    }
}

#[test]
fn header_is_generated() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/blocksens.h")).unwrap();
    for name in [
        "typedef struct BsTruthTable BsTruthTable;",
        "BS_STATUS_NULL_POINTER = 4",
        "bs_table_from_text(",
        "bs_block_sensitivity_at(",
        "bs_instance_dimacs(",
        "bs_last_error(void)",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}
