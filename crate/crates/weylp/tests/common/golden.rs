//! Golden CLI harness: pinned invocations compared byte-for-byte against
//! checked-in files, each run twice to pin determinism.
//!
//! Regenerate the golden files with
//! `WEYLP_REGEN_GOLDEN=1 cargo test -p weylp --test acceptance criterion_9_cli_golden`
//! and review the diff.

use std::path::Path;
use std::process::Command;

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub exit: i32,
}

pub const CASES: &[Case] = &[
    Case {
        name: "comm_weyl",
        args: &["comm", "--p", "3", "--n", "1", "d1", "x1"],
        exit: 0,
    },
    Case {
        name: "comm_zero",
        args: &["comm", "--p", "3", "--n", "2", "x1", "x2"],
        exit: 0,
    },
    Case {
        name: "normalize_weyl",
        args: &["normalize", "--p", "3", "--n", "1", "d1*x1"],
        exit: 0,
    },
    Case {
        name: "normalize_e2",
        args: &[
            "normalize",
            "--p",
            "3",
            "--n",
            "1",
            "--e",
            "2",
            "(x1 + 4)^2",
        ],
        exit: 0,
    },
    Case {
        name: "normalize_symbol",
        args: &[
            "normalize",
            "--p",
            "5",
            "--n",
            "2",
            "--mode",
            "symbol",
            "y2*y1 + x1",
        ],
        exit: 0,
    },
    Case {
        name: "mul_second_order",
        args: &["mul", "--p", "7", "--n", "1", "d1^2", "x1^2"],
        exit: 0,
    },
    Case {
        name: "power_euler",
        args: &["power", "--p", "5", "--n", "1", "x1*d1", "2"],
        exit: 0,
    },
    Case {
        name: "apply_euler",
        args: &["apply", "--p", "7", "--n", "1", "x1*d1", "x1^3"],
        exit: 0,
    },
    Case {
        name: "apply_localized",
        args: &["apply", "--p", "3", "--n", "1", "--f", "x1", "d1", "finv"],
        exit: 0,
    },
    Case {
        name: "central_true",
        args: &["central", "--p", "3", "--n", "1", "d1^3"],
        exit: 0,
    },
    Case {
        name: "central_false",
        args: &["central", "--p", "3", "--n", "1", "x1*d1"],
        exit: 0,
    },
    Case {
        name: "restricted_power_euler",
        args: &["restricted-power", "--p", "3", "--n", "1", "x1*d1"],
        exit: 0,
    },
    Case {
        name: "frob_center_euler",
        args: &["frob-center", "--p", "3", "--n", "1", "x1*d1"],
        exit: 0,
    },
    Case {
        name: "iso_euler",
        args: &["i", "--p", "3", "--n", "1", "x1*y1"],
        exit: 0,
    },
    Case {
        name: "inv_iso",
        args: &["inv-i", "--p", "3", "--n", "1", "d1^3*x1^3"],
        exit: 0,
    },
    Case {
        name: "pbracket_canonical",
        args: &[
            "pbracket",
            "--kind",
            "canonical",
            "--p",
            "3",
            "--n",
            "1",
            "y1^2",
            "x1",
        ],
        exit: 0,
    },
    Case {
        name: "pbracket_modp",
        args: &[
            "pbracket", "--kind", "modp", "--p", "3", "--n", "1", "d1^3", "x1^3",
        ],
        exit: 0,
    },
    Case {
        name: "bernstein",
        args: &["bernstein-deg", "--p", "3", "--n", "1", "x1^2*d1^3"],
        exit: 0,
    },
    Case {
        name: "validate_shear",
        args: &["validate-map", "tests/data/shear.map"],
        exit: 0,
    },
    Case {
        name: "transport_shear",
        args: &["transport", "tests/data/shear.map", "--symbol", "y1"],
        exit: 0,
    },
    Case {
        name: "induced_shear",
        args: &["induced-map", "tests/data/shear.map"],
        exit: 0,
    },
    Case {
        name: "transport_translation",
        args: &[
            "transport",
            "tests/data/translation.map",
            "--symbol",
            "x1*y1",
        ],
        exit: 0,
    },
    Case {
        name: "induced_translation",
        args: &["induced-map", "tests/data/translation.map"],
        exit: 0,
    },
    Case {
        name: "transport_localized",
        args: &[
            "transport",
            "tests/data/loc_identity.map",
            "--symbol",
            "finv*y1",
        ],
        exit: 0,
    },
    Case {
        name: "json_normalize",
        args: &[
            "normalize",
            "--p",
            "3",
            "--n",
            "1",
            "--format",
            "json",
            "d1*x1",
        ],
        exit: 0,
    },
    Case {
        name: "json_iso",
        args: &["i", "--p", "5", "--n", "1", "--format", "json", "y1^2"],
        exit: 0,
    },
    Case {
        name: "json_validate",
        args: &["validate-map", "tests/data/shear.map", "--format", "json"],
        exit: 0,
    },
    Case {
        name: "json_induced",
        args: &[
            "induced-map",
            "tests/data/translation.map",
            "--format",
            "json",
        ],
        exit: 0,
    },
    // error exits: expression problems are exit 2
    Case {
        name: "err_lexical",
        args: &["normalize", "--p", "3", "--n", "1", "x1 + @"],
        exit: 2,
    },
    Case {
        name: "err_unknown_atom",
        args: &["normalize", "--p", "3", "--n", "1", "z1"],
        exit: 2,
    },
    Case {
        name: "err_mode",
        args: &["normalize", "--p", "3", "--n", "1", "y1"],
        exit: 2,
    },
    Case {
        name: "err_index",
        args: &["normalize", "--p", "3", "--n", "2", "x3"],
        exit: 2,
    },
    Case {
        name: "err_finv_affine",
        args: &["normalize", "--p", "3", "--n", "1", "finv"],
        exit: 2,
    },
    Case {
        name: "err_not_prime",
        args: &["comm", "--p", "4", "--n", "1", "d1", "x1"],
        exit: 2,
    },
    Case {
        name: "err_usage",
        args: &["comm", "--p", "3", "d1", "x1"],
        exit: 2,
    },
    Case {
        name: "err_map_syntax",
        args: &["validate-map", "tests/data/broken.map"],
        exit: 2,
    },
    // domain errors are exit 1
    Case {
        name: "err_inv_iso",
        args: &["inv-i", "--p", "3", "--n", "1", "x1*d1"],
        exit: 1,
    },
    Case {
        name: "err_not_central",
        args: &[
            "pbracket", "--kind", "modp", "--p", "3", "--n", "1", "d1", "x1",
        ],
        exit: 1,
    },
    Case {
        name: "err_not_vector_field",
        args: &["restricted-power", "--p", "3", "--n", "1", "d1^2"],
        exit: 1,
    },
    Case {
        name: "err_bernstein_localized",
        args: &["bernstein-deg", "--p", "3", "--n", "1", "--f", "x1", "d1"],
        exit: 1,
    },
    Case {
        name: "err_invalid_map",
        args: &["validate-map", "tests/data/invalid.map"],
        exit: 1,
    },
    Case {
        name: "err_transport_invalid_map",
        args: &["transport", "tests/data/invalid.map", "--symbol", "y1"],
        exit: 1,
    },
    Case {
        name: "err_not_scalar_central",
        args: &["transport", "tests/data/direct_sum.map", "--symbol", "x1"],
        exit: 1,
    },
];

/// Run every case twice, pin exit codes, compare stdout and stderr bytes
/// against the golden files. Returns the number of cases.
pub fn run_all() -> usize {
    let bin = env!("CARGO_BIN_EXE_weylp");
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let golden_dir = root.join("tests/golden");
    let regen = std::env::var_os("WEYLP_REGEN_GOLDEN").is_some();
    if regen {
        std::fs::create_dir_all(&golden_dir).unwrap();
    }

    for case in CASES {
        let run = || {
            Command::new(bin)
                .args(case.args)
                .current_dir(root)
                .output()
                .expect("failed to spawn weylp binary")
        };
        let first = run();
        let second = run();
        assert_eq!(
            first.stdout, second.stdout,
            "{}: stdout differs between runs",
            case.name
        );
        assert_eq!(
            first.stderr, second.stderr,
            "{}: stderr differs between runs",
            case.name
        );
        assert_eq!(first.status.code(), second.status.code(), "{}", case.name);
        assert_eq!(
            first.status.code(),
            Some(case.exit),
            "{}: exit code (stderr: {})",
            case.name,
            String::from_utf8_lossy(&first.stderr)
        );

        let stdout_path = golden_dir.join(format!("{}.stdout", case.name));
        let stderr_path = golden_dir.join(format!("{}.stderr", case.name));
        if regen {
            std::fs::write(&stdout_path, &first.stdout).unwrap();
            std::fs::write(&stderr_path, &first.stderr).unwrap();
            continue;
        }
        let want_stdout = std::fs::read(&stdout_path)
            .unwrap_or_else(|_| panic!("{}: missing golden file {:?}", case.name, stdout_path));
        let want_stderr = std::fs::read(&stderr_path)
            .unwrap_or_else(|_| panic!("{}: missing golden file {:?}", case.name, stderr_path));
        assert_eq!(
            first.stdout,
            want_stdout,
            "{}: stdout deviates from golden file (got: {})",
            case.name,
            String::from_utf8_lossy(&first.stdout)
        );
        assert_eq!(
            first.stderr,
            want_stderr,
            "{}: stderr deviates from golden file (got: {})",
            case.name,
            String::from_utf8_lossy(&first.stderr)
        );

        // every error path except clap usage must leave one greppable line
        if case.exit != 0 && case.name != "err_usage" {
            let text = String::from_utf8_lossy(&first.stderr);
            assert_eq!(
                text.lines().filter(|l| l.starts_with("error[")).count(),
                1,
                "{}: expected exactly one diagnostic prefix in stderr: {text}",
                case.name
            );
        }
    }
    assert!(CASES.len() >= 30, "need at least 30 golden invocations");
    CASES.len()
}
