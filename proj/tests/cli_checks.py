"""Black-box checks of the command line tool: exit codes, error channels,
format switching and the export round trip. The binary path comes from
GROUPFX_CLI (set by ctest)."""

import json
import os
import subprocess
import sys
import tempfile

CLI = os.environ.get("GROUPFX_CLI")
if not CLI:
    print("GROUPFX_CLI not set", file=sys.stderr)
    sys.exit(2)

failures = []


def run(*args, env=None):
    e = os.environ.copy()
    if env:
        e.update(env)
    return subprocess.run([CLI, *args], capture_output=True, text=True, env=e)


def check(name, cond, detail=""):
    if cond:
        print(f"ok  {name}")
    else:
        failures.append(name)
        print(f"FAIL {name} {detail}")


# --- error channel and exit codes -------------------------------------------
r = run("corr", "missing.csv")
check("missing file exits 2", r.returncode == 2, f"rc={r.returncode}")
check("missing file named on stderr", "missing.csv" in r.stderr)
check("no data on stdout on failure", r.stdout == "")

r = run("limits", "--q", "2", "--rho", "1")
check("rho at the boundary exits 4", r.returncode == 4, f"rc={r.returncode}")

r = run("limits", "--q", "4", "--rho", "0.9,0.5")
check("non-ascending grid exits 4", r.returncode == 4, f"rc={r.returncode}")

r = run("simulate", "--q", "2", "--n", "3", "--rho", "0.5", "--reps", "10", "--seed", "1")
check("invalid simulate parameters exit 4", r.returncode == 4, f"rc={r.returncode}")

with tempfile.TemporaryDirectory() as tmp:
    path = os.path.join(tmp, "dup.csv")
    with open(path, "w") as f:
        f.write("a,b,c,y\n")
        for i in range(8):
            v = (i * 7 + 3) % 11
            f.write(f"{v},{v},{i},{i * 2 + 1}\n")  # b duplicates a
    r = run("fit", path)
    check("rank deficient design exits 3", r.returncode == 3, f"rc={r.returncode}")
    check("offending column named", "'b'" in r.stderr, r.stderr.strip())

    bad = os.path.join(tmp, "bad.csv")
    with open(bad, "w") as f:
        f.write("a,b,y\n1,2,3\n4,x,6\n")
    r = run("corr", bad)
    check("parse error exits 2", r.returncode == 2, f"rc={r.returncode}")
    check("parse error names the row", "row 2" in r.stderr, r.stderr.strip())

r = run("fit", "hald", "--rename-apc", "--groups", "x1,x2", "--weights", "0.6,0.6")
check("unnormalized weights exit 4", r.returncode == 4, f"rc={r.returncode}")

r = run("fit", "hald", "--rename-apc", "--weights", "0.5,0.5")
check("weights without an explicit group exit 4", r.returncode == 4, f"rc={r.returncode}")

# --- formats -----------------------------------------------------------------
text = run("corr", "hald")
check("text output carries the strong pair", "-0.97295" in text.stdout)

js = run("corr", "hald", "--json")
doc = json.loads(js.stdout)
check("json corr value", abs(doc["Correlations"]["values"][7] - -0.97295) < 1e-5)

env_js = run("corr", "hald", env={"GROUPFX_FORMAT": "json"})
check("GROUPFX_FORMAT=json switches the default", env_js.stdout == js.stdout)

# --- df conventions ----------------------------------------------------------
conv = run("fit", "hald", "--rename-apc", "--df", "conventional", "--json")
doc = json.loads(conv.stdout)
check("conventional df is 8", doc["Model"]["rows"][0][1] == 8)
check("conventional sigma is 2.446", abs(doc["Model"]["rows"][0][0] - 2.446) < 1e-3)

r = run("fit", "hald", "--df", "bogus")
check("unknown df convention exits 4", r.returncode == 4, f"rc={r.returncode}")

# --- groups listing ----------------------------------------------------------
g = run("groups", "hald")
check("groups lists the sign-arranged pairs", "{x1,-x3}" in g.stdout and "{x2,-x4}" in g.stdout)
check("groups reports r_min", "0.97295" in g.stdout)

# --- explicit groups without rename flip in place ----------------------------
r = run("fit", "hald", "--groups", "x1,x3", "--json")
doc = json.loads(r.stdout)
labels = [row[0] for row in doc["Coefficients and group effects"]["rows"]]
check("flipped member annotated", "-x3" in labels, str(labels))
g1 = doc["Coefficients and group effects"]["rows"][4]
check("in-place group effect matches the renamed one", abs(g1[1] - 14.673) < 1e-3, str(g1))

# --- limits and simulate values ------------------------------------------------
r = run("limits", "--q", "4", "--rho", "0,0.9,0.99,0.999", "--json")
doc = json.loads(r.stdout)
rows = doc["Equicorrelation limit trace (q = 4)"]["rows"]
check("limits final quad form", abs(rows[-1][3] - 1.00075) < 1e-5, str(rows[-1]))
check("limits orthogonal var ratio", abs(rows[0][5] - 0.25) < 1e-12)

r = run("simulate", "--q", "2", "--n", "20", "--rho", "0.5", "--sigma", "0",
        "--reps", "10", "--seed", "3", "--json")
doc = json.loads(r.stdout)
row = doc["Group effect variance"]["rows"][0]
check("noiseless simulate has zero empirical variance", row[0] == 0.0, str(row))
check("noiseless simulate ratio is null", row[2] is None, str(row))

# --- export round trip ---------------------------------------------------------
with tempfile.TemporaryDirectory() as tmp:
    out = os.path.join(tmp, "hald.csv")
    r = run("export-hald", "-o", out)
    check("export-hald writes a file", r.returncode == 0 and os.path.exists(out))
    r2 = run("corr", out)
    check("exported csv reproduces the correlations", "-0.97295" in r2.stdout)

r = run("export-hald")
check("export-hald stdout starts with the header", r.stdout.startswith("x1,x2,x3,x4,y\n"))
check("export-hald has 13 data rows", r.stdout.count("\n") == 14)

if failures:
    print(f"{len(failures)} cli checks failed", file=sys.stderr)
    sys.exit(1)
print("all cli checks passed")
