"""Native JSON network format.

Document shape:

    {
      "name": "Asia",
      "variables": [{"name": "Smoker", "states": ["yes", "no"],
                     "alias": "S"}, ...],
      "cpts": [{"child": "Smoker", "parents": [], "rows": [[0.5, 0.5]]}, ...]
    }

``alias`` is optional display metadata. CPT rows are ordered by parent
state combinations with the last parent cycling fastest. Unrecognized
top-level keys are ignored so that annotated documents (for example the
service's structure responses, which add ``id`` and ``arcs``) re-upload
cleanly. Schema violations raise :class:`JsonSchemaError` with a JSON
path locating the problem.
"""

from __future__ import annotations

import json

from ..errors import JsonSchemaError
from ..model import BayesianNetwork, Cpt, Variable, build_network


def parse_network_json(text: str) -> BayesianNetwork:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise JsonSchemaError(f"invalid JSON: {exc}") from None
    return network_from_document(doc)


def network_from_document(doc) -> BayesianNetwork:
    if not isinstance(doc, dict):
        raise JsonSchemaError("document must be a JSON object")
    name = doc.get("name", "network")
    if not isinstance(name, str):
        raise JsonSchemaError("must be a string", "$.name")

    raw_vars = doc.get("variables")
    if not isinstance(raw_vars, list):
        raise JsonSchemaError("must be an array", "$.variables")
    if not raw_vars:
        raise JsonSchemaError(
            "network must contain at least one variable", "$.variables"
        )
    variables = []
    for i, entry in enumerate(raw_vars):
        path = f"$.variables[{i}]"
        if not isinstance(entry, dict):
            raise JsonSchemaError("must be an object", path)
        vname = entry.get("name")
        if not isinstance(vname, str) or not vname:
            raise JsonSchemaError("must be a nonempty string", f"{path}.name")
        states = entry.get("states")
        if (
            not isinstance(states, list)
            or len(states) < 2
            or not all(isinstance(s, str) and s for s in states)
        ):
            raise JsonSchemaError(
                "must be an array of at least two nonempty strings",
                f"{path}.states",
            )
        alias = entry.get("alias")
        if alias is not None and not isinstance(alias, str):
            raise JsonSchemaError("must be a string", f"{path}.alias")
        variables.append(Variable(vname, tuple(states), alias))

    raw_cpts = doc.get("cpts")
    if not isinstance(raw_cpts, list):
        raise JsonSchemaError("must be an array", "$.cpts")
    cpts = []
    for i, entry in enumerate(raw_cpts):
        path = f"$.cpts[{i}]"
        if not isinstance(entry, dict):
            raise JsonSchemaError("must be an object", path)
        child = entry.get("child")
        if not isinstance(child, str):
            raise JsonSchemaError("must be a string", f"{path}.child")
        parents = entry.get("parents", [])
        if not isinstance(parents, list) or not all(
            isinstance(q, str) for q in parents
        ):
            raise JsonSchemaError("must be an array of strings",
                                  f"{path}.parents")
        rows = entry.get("rows")
        if not isinstance(rows, list) or not rows:
            raise JsonSchemaError("must be a nonempty array", f"{path}.rows")
        for r, row in enumerate(rows):
            if not isinstance(row, list) or not all(
                isinstance(x, (int, float)) and not isinstance(x, bool)
                for x in row
            ):
                raise JsonSchemaError(
                    "must be an array of numbers", f"{path}.rows[{r}]"
                )
        cpts.append(Cpt(child, tuple(parents), [tuple(map(float, r)) for r in rows]))

    return build_network(variables, cpts, name=name)


def network_to_document(net: BayesianNetwork) -> dict:
    variables = []
    for v in net.variables:
        entry: dict = {"name": v.name, "states": list(v.states)}
        if v.alias is not None:
            entry["alias"] = v.alias
        variables.append(entry)
    cpts = [
        {
            "child": v.name,
            "parents": list(net.cpts[v.name].parents),
            "rows": [list(row) for row in net.cpts[v.name].rows],
        }
        for v in net.variables
    ]
    return {"name": net.name, "variables": variables, "cpts": cpts}


def write_network_json(net: BayesianNetwork) -> str:
    return json.dumps(network_to_document(net), indent=2) + "\n"
