use std::path::PathBuf;
use std::process::Command;

fn header_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include")
}

#[test]
fn header_declares_the_api() {
    let text = std::fs::read_to_string(header_dir().join("fibercomplex.h")).unwrap();
    for symbol in [
        "typedef struct FcComplex FcComplex;",
        "typedef struct FcTrace FcTrace;",
        "FC_STATUS_NOT_COCYCLE = 5",
        "fc_complex_new(",
        "fc_trace_parse(",
        "fc_invariant_evaluate(",
        "fc_last_error(",
    ] {
        assert!(text.contains(symbol), "missing {symbol}");
    }
}

#[test]
fn header_compiles_as_c() {
    let dir = std::env::temp_dir().join(format!("fibercomplex-header-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("use.c");
    std::fs::write(
        &src,
        "#include \"fibercomplex.h\"\n\
         int probe(void) {\n\
           FcComplex *c = 0;\n\
           size_t n = 0;\n\
           if (fc_complex_new(FC_VARIANT_FULL, &c) != FC_STATUS_OK) return -1;\n\
           fc_complex_betti(c, 1, &n);\n\
           fc_complex_free(c);\n\
           return (int)n;\n\
         }\n",
    )
    .unwrap();
    let compiler = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = match Command::new(&compiler)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(header_dir())
        .arg(&src)
        .status()
    {
        Ok(s) => s,
        Err(e) => {
            eprintln!("no C compiler (`{compiler}`: {e}); header syntax not checked");
            return;
        }
    };
    assert!(status.success());
}
