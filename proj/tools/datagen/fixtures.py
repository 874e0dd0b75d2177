"""Writes the replay fixtures under data/fixtures.

Usage: python3 fixtures.py <data dir>

Every fixture pairs a mock LLM script with a simulator scenario. The
expected block holds the outcome fields that replay compares.
"""
import json
import math
import os
import sys

from cases import (cavity_ras_files, counterflow_files, hit_allrun, hit_block_mesh, hit_cyclic_boundary,
                   hit_files, ico_cavity_files, pitz_files, poiseuille_files, simple_allrun,
                   square_bend_files, buoyant_files, field, VEL)
from foam import foamfile

ARCH_MATCH = "generate the OpenFOAM input foamfiles list"
REVISE_MATCH = "Add any missing foamfiles to the list"
ALLRUN_MATCH = "Your task is to write linux execution command allrun file"
REVIEW_MATCH = "has been executed in OpenFOAM10"

FOLDER_ORDER = {"system": 0, "constant": 1, "0": 2}


def tokens(text):
    return math.ceil(len(text) / 4)


def entry(match, reply, prompt_tokens):
    return {"match": match, "reply": reply,
            "usage": {"prompt_tokens": prompt_tokens, "completion_tokens": tokens(reply)}}


def ordered(files):
    return sorted(files.items(), key=lambda kv: (FOLDER_ORDER.get(kv[0][0], 3), kv[0][1]))


def arch_reply(requirement, descriptor, names):
    lines = [f"case {k}: {v}" for k, v in descriptor.items()]
    lines.append(f"```splits into {len(names)} subtasks:")
    for i, (folder, name) in enumerate(names, 1):
        lines.append(f"subtask{i}: to Write a OpenFoam {name} foamfile in {folder} folder that could be "
                     f"used to meet user requirement:{requirement}.")
    lines.append("```")
    return "\n".join(lines)


def code_reply(content):
    return "```\n" + content + "```"


def write_match(folder, name):
    return f"to Write a OpenFoam {name} foamfile in {folder} folder"


def rewrite_match(name):
    return f"to rewrite a OpenFoam {name} foamfile"


def review_reply(pairs):
    names = ", ".join(n for _, n in pairs)
    folders = ", ".join(f for f, _ in pairs)
    return f"###{names}### in ``{folders}``"


def initial_entries(requirement, descriptor, files, allrun_text):
    items = ordered(files)
    names = [k for k, _ in items]
    script = [entry(ARCH_MATCH, arch_reply(requirement, descriptor, names), 1450)]
    for (folder, name), body in items:
        content = foamfile(folder, name, body)
        script.append(entry(write_match(folder, name), code_reply(content), 620 + tokens(content)))
    script.append(entry(ALLRUN_MATCH, code_reply(allrun_text), 980))
    return script


def review_entries(pairs, rewrites, error_tokens=180):
    script = [entry(REVIEW_MATCH, review_reply(pairs), 310 + error_tokens)]
    for (folder, name), body in rewrites:
        content = foamfile(folder, name, body)
        script.append(entry(rewrite_match(name), code_reply(content), 540 + error_tokens + 2 * tokens(content)))
    return script


def fatal(message, path):
    return (f"\n\n--> FOAM FATAL IO ERROR: \n{message}\n\nfile: {path}\n\n"
            "    From function Foam::dictionary::lookupEntry\n    in file db/dictionary/dictionary.C at line 1017.\n\n"
            "FOAM exiting\n\n")


def fpe(app):
    return (f"#0  Foam::error::printStack(Foam::Ostream&) at ??:?\n"
            f"#1  Foam::sigFpe::sigHandler(int) at ??:?\n#2  ? in /lib/x86_64-linux-gnu/libc.so.6\n"
            f"#3  Foam::GAMGSolver::solve in {app}\nFloating point exception (core dumped)\n")


def mesh_ok():
    return {"pattern": "blockMesh", "stdout": "Creating block mesh topology\nWriting polyMesh\n\nEnd\n"}


def solver_ok(app):
    return {"pattern": app, "stdout": f"Create time\n\nCreate mesh for time = 0\n", "advance": {"reaches_end_time": True}}


def solver_diverges(app):
    return {"pattern": app, "exit_code": 1, "stdout": "Create time\n\nCreate mesh for time = 0\n",
            "stderr": fpe(app), "advance": {"started": True, "diverges": True}}


def missing_keyword_rule(marker, keyword):
    return {"pattern": "blockMesh", "when": [{"file": "system/blockMeshDict", "contains": marker, "absent": True}],
            "exit_code": 1,
            "stderr": fatal(f"keyword {keyword} is undefined in dictionary \"system/blockMeshDict\"",
                            "system/blockMeshDict")}


# --- Benchmark cases -------------------------------------------------------

def newtonian(files):
    files = dict(files)
    files[("constant", "momentumTransport")] = "simulationType  laminar;\n\nlaminar\n{\n    model           Stokes;\n}\n"
    files.pop(("0", "sigma"), None)
    return files


CASES = {
    "HIT": {
        "descriptor": {"name": "HIT", "domain": "DNS", "category": "None", "solver": "dnsFoam"},
        "app": "dnsFoam",
        "files": {"dataset1": lambda: hit_files(32), "dataset2": lambda: hit_files(20)},
        "allrun": hit_allrun(),
    },
    "PitzDaily": {
        "descriptor": {"name": "pitzDaily", "domain": "incompressible", "category": "LES", "solver": "pisoFoam"},
        "app": "pisoFoam",
        "files": {"dataset1": lambda: pitz_files(5), "dataset2": lambda: pitz_files(8)},
        "allrun": simple_allrun(),
    },
    "Cavity": {
        "descriptor": {"name": "cavity", "domain": "incompressible", "category": "RAS", "solver": "pisoFoam"},
        "app": "pisoFoam",
        "files": {"dataset1": lambda: cavity_ras_files("15 15 1", "RNGkEpsilon"),
                  "dataset2": lambda: cavity_ras_files("15 15 1", "kEpsilon")},
        "allrun": simple_allrun(),
    },
    "LidDrivenCavity": {
        "descriptor": {"name": "lidDrivenCavity", "domain": "incompressible", "category": "None", "solver": "icoFoam"},
        "app": "icoFoam",
        "files": {"dataset1": lambda: ico_cavity_files(1), "dataset2": lambda: ico_cavity_files(2)},
        "allrun": simple_allrun(),
    },
    "SquareBendLiq": {
        "descriptor": {"name": "squareBendLiq", "domain": "compressible", "category": "None", "solver": "rhoSimpleFoam"},
        "app": "rhoSimpleFoam",
        "files": {"dataset1": lambda: square_bend_files(100, 1, 10), "dataset2": lambda: square_bend_files(1000, 1, 100)},
        "allrun": simple_allrun(),
    },
    "PlanarPoiseuille": {
        "descriptor": {"name": "planarPoiseuille", "domain": "incompressible", "category": "laminar", "solver": "pimpleFoam"},
        "app": "pimpleFoam",
        "files": {"dataset1": lambda: poiseuille_files("1 20 1"),
                  "dataset2": lambda: newtonian(poiseuille_files("1 20 1"))},
        "allrun": simple_allrun(),
    },
    "CounterFlowFlame": {
        "descriptor": {"name": "counterFlowFlame2D", "domain": "combustion", "category": "laminar", "solver": "reactingFoam"},
        "app": "reactingFoam",
        "files": {"dataset1": lambda: counterflow_files("50 20 1"), "dataset2": lambda: counterflow_files("40 20 1")},
        "allrun": simple_allrun(),
    },
    "BuoyantCavity": {
        "descriptor": {"name": "buoyantCavity", "domain": "heatTransfer", "category": "RAS", "solver": "buoyantFoam"},
        "app": "buoyantFoam",
        "files": {"dataset1": lambda: buoyant_files(20), "dataset2": lambda: buoyant_files(15)},
        "allrun": simple_allrun(),
    },
}


def load_manifest(data, name):
    with open(os.path.join(data, "manifests", f"{name}.json")) as f:
        return {c["case_id"]: c for c in json.load(f)["cases"]}


def base_scenario(case_def, extra_rules=()):
    rules = list(extra_rules) + [mesh_ok()]
    if case_def["allrun"] == hit_allrun():
        rules += [{"pattern": "cp 0/U.orig 0/U", "when": [{"file": "0/U.orig", "exists": False}], "exit_code": 1,
                   "stderr": "cp: cannot stat '0/U.orig': No such file or directory\n"},
                  {"pattern": "cp 0/U.orig 0/U"},
                  {"pattern": "boxTurb", "stdout": "Generating kinetic energy spectrum\nEnd\n"}]
    return rules


def fixture(name, case, script, rules, expected, config=None):
    doc = {"name": name, "requirement": case["requirement"], "checks": case["checks"]}
    if config:
        doc["config"] = config
    doc["script"] = script
    doc["scenario"] = {"rules": rules}
    doc["expected"] = expected
    return doc


def declared(script, consumed=None):
    used = script if consumed is None else script[:consumed]
    return (sum(e["usage"]["prompt_tokens"] * e.get("repeat", 1) for e in used),
            sum(e["usage"]["completion_tokens"] * e.get("repeat", 1) for e in used))


def with_tokens(expected, script):
    p, c = declared(script)
    expected.update({"prompt_tokens": p, "completion_tokens": c, "total_tokens": p + c})
    return expected


def bench_variants(case_id, case, dataset):
    case_def = CASES[case_id]
    files = case_def["files"][dataset]()
    app = case_def["app"]
    req = case["requirement"]
    out = {}

    script = initial_entries(req, case_def["descriptor"], files, case_def["allrun"])
    rules = base_scenario(case_def, [missing_keyword_rule("convertToMeters", "convertToMeters")]) + [solver_ok(app)]
    out["clean"] = fixture(f"{case_id}-clean", case, script, rules,
                           with_tokens({"score": 4, "iterations": 0, "stop_reason": "success"}, script))

    broken = dict(files)
    broken[("system", "blockMeshDict")] = files[("system", "blockMeshDict")].replace("convertToMeters", "scale")
    script = initial_entries(req, case_def["descriptor"], broken, case_def["allrun"])
    script += review_entries([("system", "blockMeshDict")], [(("system", "blockMeshDict"), files[("system", "blockMeshDict")])])
    out["repair"] = fixture(f"{case_id}-repair", case, script, rules,
                            with_tokens({"score": 4, "iterations": 1, "stop_reason": "success"}, script))

    script = initial_entries(req, case_def["descriptor"], files, case_def["allrun"])
    for i in range(20):
        script += review_entries([("system", "controlDict")], [(("system", "controlDict"), files[("system", "controlDict")])],
                                 error_tokens=180 + 12 * i)
    rules = base_scenario(case_def) + [solver_diverges(app)]
    out["fail"] = fixture(f"{case_id}-fail", case, script, rules,
                          with_tokens({"score": 2, "iterations": 20, "stop_reason": "iteration-cap"}, script))
    return out


# --- Replay fixtures -------------------------------------------------------

def hit_fixture(case):
    case_def = CASES["HIT"]
    req = case["requirement"]
    files = hit_files(32, neighbour=False, periodic=False)
    script = initial_entries(req, case_def["descriptor"], files, case_def["allrun"])
    script += review_entries([("system", "blockMeshDict")], [(("system", "blockMeshDict"), hit_block_mesh(32, True))])
    script += review_entries([("0", "U.orig")], [(("0", "U.orig"), field(VEL, "uniform (0 0 0)", hit_cyclic_boundary(True)))],
                             error_tokens=150)
    rules = [
        {"pattern": "blockMesh", "when": [{"file": "system/blockMeshDict", "contains": "neighbourPatch", "absent": True}],
         "exit_code": 1, "stderr": fatal("No 'neighbourPatch' provided", "system/blockMeshDict/boundary/periodic_x_half0")},
        mesh_ok(),
        {"pattern": "cp 0/U.orig 0/U"},
        {"pattern": "boxTurb", "when": [{"file": "0/U.orig", "contains": "periodic_x_half0", "absent": True}],
         "exit_code": 1, "stderr": fatal("cannot find patchField entry for cyclic periodic_x_half0", "0/U")},
        {"pattern": "boxTurb", "stdout": "Generating kinetic energy spectrum\nEnd\n"},
        solver_ok("dnsFoam"),
    ]
    expected = with_tokens({"passed": True, "score": 4, "iterations": 2, "stop_reason": "success",
                            "case_name": "HIT", "requirement_checks": [{"id": "grid", "passed": True}]}, script)
    return fixture("hit", case, script, rules, expected)


def missing_file_fixtures(case):
    case_def = CASES["HIT"]
    req = case["requirement"]
    full = hit_files(32)
    partial = {k: v for k, v in full.items() if k != ("0", "U.orig")}
    initial = initial_entries(req, case_def["descriptor"], partial, case_def["allrun"])
    rules = base_scenario(case_def) + [solver_ok("dnsFoam")]

    names = [k for k, _ in ordered(full)]
    revise = entry(REVISE_MATCH, arch_reply(req, case_def["descriptor"], names), 1690)
    u_orig = foamfile("0", "U.orig", full[("0", "U.orig")])
    script = initial + [entry(REVIEW_MATCH, review_reply([("0", "U.orig"), ("0", "U")]), 470), revise,
                        entry(write_match("0", "U.orig"), code_reply(u_orig), 620 + tokens(u_orig))]
    appended = [k for k, _ in ordered(partial)] + [("0", "U.orig")]
    expected = with_tokens({"passed": True, "score": 4, "iterations": 1, "stop_reason": "success",
                            "subtasks": [f"{f}/{n}" for f, n in appended]}, script)
    revised = fixture("missing_file", case, script, rules, expected)

    script = initial + [dict(entry(REVIEW_MATCH, review_reply([("0", "U.orig"), ("0", "U")]), 470), repeat=20)]
    expected = with_tokens({"passed": False, "score": 1, "iterations": 20, "stop_reason": "iteration-cap",
                            "subtasks": [f"{f}/{n}" for (f, n), _ in ordered(partial)]}, script)
    capped = fixture("missing_file_no_review_arch", case, script, rules, expected, {"no_review_arch": True})
    return revised, capped


def always_fail_fixture(case):
    case_def = CASES["LidDrivenCavity"]
    files = ico_cavity_files(1)
    script = initial_entries(case["requirement"], case_def["descriptor"], files, case_def["allrun"])
    for i in range(20):
        script += review_entries([("system", "controlDict")], [(("system", "controlDict"), files[("system", "controlDict")])],
                                 error_tokens=180 + 12 * i)
    rules = base_scenario(case_def) + [solver_diverges("icoFoam")]
    expected = with_tokens({"passed": False, "score": 2, "iterations": 20, "stop_reason": "iteration-cap"}, script)
    return fixture("always_fail", case, script, rules, expected)


def clean_fixture(name, case_id, case):
    case_def = CASES[case_id]
    script = initial_entries(case["requirement"], case_def["descriptor"], case_def["files"]["dataset1"](), case_def["allrun"])
    rules = base_scenario(case_def) + [solver_ok(case_def["app"])]
    expected = with_tokens({"passed": True, "score": 4, "iterations": 0, "stop_reason": "success",
                            "requirement_checks": [{"id": c["id"], "passed": True} for c in case["checks"]]}, script)
    return fixture(name, case, script, rules, expected)


def dump(path, doc):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w") as f:
        json.dump(doc, f, indent=1)
        f.write("\n")


def main(data):
    d1 = load_manifest(data, "dataset1")
    fixtures_dir = os.path.join(data, "fixtures")
    replay = {
        "hit": hit_fixture(d1["HIT"]),
        "cavity": clean_fixture("cavity", "Cavity", d1["Cavity"]),
        "squarebendliq": clean_fixture("squarebendliq", "SquareBendLiq", d1["SquareBendLiq"]),
        "always_fail": always_fail_fixture(d1["LidDrivenCavity"]),
    }
    replay["missing_file"], replay["missing_file_no_review_arch"] = missing_file_fixtures(d1["HIT"])
    for name, doc in replay.items():
        dump(os.path.join(fixtures_dir, name, "fixture.json"), doc)
    for dataset in ("dataset1", "dataset2"):
        manifest = load_manifest(data, dataset)
        for case_id, case in manifest.items():
            for variant, doc in bench_variants(case_id, case, dataset).items():
                dump(os.path.join(fixtures_dir, "bench", dataset, case_id, f"{variant}.json"), doc)


if __name__ == "__main__":
    main(sys.argv[1])
