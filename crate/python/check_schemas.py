"""Validates instance and curve JSON files against the shipped schemas.

usage: python check_schemas.py FILE...   (curve files are recognised by their
"segments" key)
"""

import json
import pathlib
import sys

import jsonschema
from referencing import Registry, Resource

SCHEMAS = pathlib.Path(__file__).resolve().parent.parent / "schemas"


def main(paths):
    instance = json.loads((SCHEMAS / "instance.schema.json").read_text())
    curve = json.loads((SCHEMAS / "curve.schema.json").read_text())
    registry = Registry().with_resources(
        [(s["$id"], Resource.from_contents(s)) for s in (instance, curve)]
    )
    for path in paths:
        doc = json.loads(pathlib.Path(path).read_text())
        schema = curve if "segments" in doc else instance
        jsonschema.Draft202012Validator(schema, registry=registry).validate(doc)
        print(f"{path}: ok")


if __name__ == "__main__":
    main(sys.argv[1:])
