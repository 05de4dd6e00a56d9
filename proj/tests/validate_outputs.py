"""Run the CLI and validate every JSON artifact against schemas/."""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema
from referencing import Registry, Resource


def main(cli: str, schema_dir: str) -> int:
    schemas = {p.name: json.loads(p.read_text()) for p in pathlib.Path(schema_dir).glob("*.schema.json")}
    registry = Registry().with_resources((name, Resource.from_contents(s)) for name, s in schemas.items())

    def check(path: pathlib.Path, schema: str) -> None:
        validator = jsonschema.Draft202012Validator(schemas[schema], registry=registry)
        validator.validate(json.loads(path.read_text()))
        print(f"ok {path.name} ~ {schema}")

    with tempfile.TemporaryDirectory() as tmp:
        out = pathlib.Path(tmp)
        runs = [
            ["sweep", "--samples", "64", "--with-correlations", "--out", str(out / "s3")],
            ["sweep", "--qubits", "4", "--samples", "64", "--focus", "2", "--out", str(out / "s4")],
            ["check-state", "--named", "w-paper", "--out", str(out / "c")],
            ["check-state", "--named", "ghz", "--focus", "1", "--out", str(out / "g")],
            ["verify", "--tier", "quick", "--out", str(out / "v")],
        ]
        for args in runs:
            subprocess.run([cli, *args], check=True, stdout=subprocess.DEVNULL)
        for d in ("s3", "s4"):
            check(out / d / "summary.json", "summary.schema.json")
            check(out / d / "run_info.json", "run_info.schema.json")
        for d in ("c", "g"):
            check(out / d / "check_state.json", "check_state.schema.json")
        check(out / "v" / "verify.json", "verify.schema.json")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1], sys.argv[2]))
