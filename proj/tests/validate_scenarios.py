"""Validate shipped scenario files against the schema printed by the CLI."""
import glob
import json
import os
import subprocess
import sys

try:
    import jsonschema
except ImportError:
    print("jsonschema not installed")
    sys.exit(77)

binary, scenario_dir = sys.argv[1], sys.argv[2]
schema = json.loads(subprocess.run([binary, "schema"], check=True, capture_output=True, text=True).stdout)
jsonschema.Draft7Validator.check_schema(schema)
validator = jsonschema.Draft7Validator(schema)

# round trip through a generic serializer
assert json.loads(json.dumps(schema)) == schema

files = sorted(glob.glob(os.path.join(scenario_dir, "*.json")))
kinds = set()
failed = 0
for path in files:
    with open(path) as fh:
        doc = json.load(fh)
    errors = list(validator.iter_errors(doc))
    for err in errors:
        print(f"{path}: {err.message}")
    failed += bool(errors)
    for sc in doc.get("scenarios", [doc]):
        kinds.add(sc["kind"])
        if sc["kind"] == "evolve":
            kinds.add(sc["payload"]["field"]["kind"])

bad = {"id": "x", "kind": "evolve", "payload": {"field": {"kind": "rotation"}, "t_end": 1, "points": []}}
assert list(validator.iter_errors(bad)), "schema accepted an invalid scenario"

required = {"rotation", "fixed_points", "degenerate", "lebedev", "verify"}
missing = required - kinds
if missing:
    print("missing scenario kinds:", sorted(missing))
    failed += 1
print(f"{len(files)} scenario files checked, {failed} failures")
sys.exit(1 if failed else 0)
