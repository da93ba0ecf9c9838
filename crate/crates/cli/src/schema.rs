use serde_json::{json, Value};

const RATIONAL: &str = "^-?[0-9]+(/[0-9]+)?$";

/// JSON schemas of every file format the CLI reads and of its report.
pub fn schemas() -> Value {
    let rational = json!({ "type": "string", "pattern": RATIONAL });
    let element = json!({ "type": "array", "items": { "type": "integer", "minimum": 0 } });
    json!({
        "table": {
            "type": "object",
            "required": ["elements", "table"],
            "properties": {
                "elements": { "type": "array", "items": { "type": "string" }, "minItems": 1 },
                "zero": { "type": ["string", "null"] },
                "table": { "type": "array", "items": { "type": "array", "items": { "type": "integer", "minimum": 0 } } },
                "scale": {
                    "type": "object",
                    "description": "element name -> scale; missing nonzero elements have scale 1",
                    "additionalProperties": { "oneOf": [rational, { "type": "integer" }] }
                }
            }
        },
        "family": {
            "type": "object",
            "required": ["family"],
            "properties": {
                "family": { "enum": ["free", "abelian", "axb"] },
                "weights": { "type": "array", "items": rational }
            }
        },
        "trace": {
            "type": "object",
            "required": ["weights", "angles"],
            "properties": {
                "weights": { "type": "array", "items": { "oneOf": [{ "type": "number" }, rational] } },
                "angles": { "type": "array", "items": { "type": "array", "items": { "oneOf": [rational, { "type": "integer" }] } } }
            }
        },
        "spanning_element": {
            "oneOf": [
                { "const": "zero" },
                {
                    "type": "object",
                    "required": ["s", "t"],
                    "description": "words and vectors as integer arrays, axb elements as [b, a]",
                    "properties": { "s": element, "t": element }
                }
            ]
        },
        "kms_query": {
            "type": "object",
            "properties": {
                "beta": { "type": "number", "exclusiveMinimum": 0 },
                "cutoff": rational,
                "trace": { "$ref": "#/trace" },
                "element": { "$ref": "#/spanning_element" }
            }
        },
        "matrix": {
            "type": "object",
            "properties": {
                "rows": { "type": "array", "items": { "type": "array", "items": { "type": "integer" } } },
                "cols": { "type": "integer", "minimum": 0 }
            }
        },
        "presentation": {
            "type": "object",
            "properties": {
                "generators": { "type": "integer", "minimum": 0 },
                "rows": {
                    "type": "array",
                    "items": { "type": "array", "items": { "oneOf": [
                        { "type": "integer" },
                        { "type": "string", "pattern": "^poly:\\[.*\\]$", "description": "coefficients, constant term first" }
                    ] } }
                }
            }
        },
        "graph": {
            "type": "object",
            "required": ["vertices", "edges"],
            "properties": {
                "vertices": { "type": "array", "items": { "type": "string" } },
                "edges": { "type": "array", "items": {
                    "type": "object",
                    "required": ["name", "source", "range"],
                    "properties": { "name": { "type": "string" }, "source": { "type": "string" }, "range": { "type": "string" } }
                } }
            }
        },
        "substitution": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["vertex", "terms"],
                "properties": {
                    "vertex": { "type": "string" },
                    "terms": { "type": "array", "items": {
                        "type": "object",
                        "required": ["sign", "kind", "name"],
                        "properties": {
                            "sign": { "type": "integer" },
                            "kind": { "enum": ["vertex", "edge_range"] },
                            "name": { "type": "string" }
                        }
                    } }
                }
            }
        },
        "report": {
            "type": "object",
            "required": ["status", "command", "payload", "provenance"],
            "properties": {
                "status": { "enum": ["ok", "violation", "error"] },
                "command": { "type": "string" },
                "payload": {},
                "provenance": { "type": "object", "additionalProperties": { "type": "string" } },
                "witness": { "description": "present exactly when status is violation" },
                "error": { "type": "string" }
            }
        }
    })
}
