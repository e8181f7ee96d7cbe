//! Compiles tests/c/smoke.c against the generated header and the static
//! library, then runs it.

use std::path::PathBuf;
use std::process::Command;

fn static_lib() -> Option<PathBuf> {
    // CARGO_TARGET_TMPDIR is <target>/tmp; the library sits in <target>/<profile>
    let target = PathBuf::from(env!("CARGO_TARGET_TMPDIR"))
        .parent()?
        .to_path_buf();
    ["debug", "release"]
        .iter()
        .map(|p| target.join(p).join("libqdt_ffi.a"))
        .find(|p| p.exists())
}

#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let Some(lib) = static_lib() else {
        eprintln!("libqdt_ffi.a not found; build the crate first");
        return;
    };
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping");
        return;
    }
    let exe = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("qdt_c_smoke");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("run cc");
    assert!(status.success(), "C smoke program failed to compile");
    let out = Command::new(&exe).output().expect("run smoke binary");
    assert!(
        out.status.success(),
        "smoke binary failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}

#[test]
fn header_declares_the_api() {
    let header =
        std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/qdt.h"))
            .expect("generated header");
    for symbol in [
        "typedef struct QdtTree QdtTree;",
        "QdtStatus qdt_tree_parse(",
        "QdtStatus qdt_evolve(",
        "QdtStatus qdt_simulate(",
        "QDT_STATUS_OVERFLOW = 4",
        "const char *qdt_last_error_message(void);",
    ] {
        assert!(header.contains(symbol), "header is missing {symbol}");
    }
}
