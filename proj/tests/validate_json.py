"""Run each experiment through the CLI with --format json and validate the
output against the schema. Usage: validate_json.py CLI SCHEMA SCRATCH_DIR"""
import json
import pathlib
import subprocess
import sys

import jsonschema

RUNS = {
    "random-small": ["--d", "4", "--rank", "1,2", "--reps", "2"],
    "func-small": ["--d", "3", "--functions", "Alpine,Qing"],
    "func-big": ["--d", "8", "--n", "64", "--functions", "Exponential,Qing"],
    "kdep-hist": ["--d", "3", "--reps", "3"],
}


def main():
    cli, schema_path, scratch = sys.argv[1], pathlib.Path(sys.argv[2]), pathlib.Path(sys.argv[3])
    scratch.mkdir(parents=True, exist_ok=True)
    schema = json.loads(schema_path.read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)
    failed = False
    for experiment, extra in RUNS.items():
        out = scratch / f"{experiment}.json"
        subprocess.run([cli, "--experiment", experiment, "--format", "json", "--out", str(out), *extra], check=True)
        doc = json.loads(out.read_text())
        errors = list(validator.iter_errors(doc))
        for table in doc["tables"]:
            for row in table["rows"]:
                if len(row) != len(table["columns"]):
                    errors.append(f"{table['name']}: row width {len(row)} != {len(table['columns'])}")
        for e in errors:
            print(f"{experiment}: {getattr(e, 'message', e)}")
        failed = failed or bool(errors)
        print(f"{experiment}: {'ok' if not errors else 'INVALID'}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
