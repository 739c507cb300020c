'''The module containing the report writers.

Floats are written with repr so identical runs give byte-identical files.
'''

import csv
import json
import math
import os
from fractions import Fraction

import mods.exponents as mx


# ----------------------------------------------------------------------------

def cell(value):
    '''Returns the text of one report value.'''
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return mx.exact_text(value)
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    return str(value)


def plain(value):
    '''Returns value with Fractions, infinities and tuples turned into JSON-safe values.'''
    if isinstance(value, dict):
        return {str(key): plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(item) for item in value]
    if isinstance(value, Fraction):
        return mx.exact_text(value)
    if isinstance(value, float) and not math.isfinite(value):
        return cell(value)
    return value


def write_csv(path: str, columns, rows):
    '''Writes rows (dicts) to path with the columns in the given order.'''
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([cell(row.get(column)) for column in columns])


def write_json(path: str, columns, rows):
    '''Writes rows (dicts) restricted to columns as a sorted, indented JSON list.'''
    records = [{column: plain(row.get(column)) for column in columns} for row in rows]
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(json.dumps(records, indent=2, sort_keys=True))
        handle.write("\n")


def write_table(directory: str, name: str, columns, rows, fmt: str = "csv"):
    '''Writes <name>.csv or <name>.json in directory and returns its path.'''
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, f"{name}.{fmt}")
    if fmt == "json":
        write_json(path, columns, rows)
    else:
        write_csv(path, columns, rows)
    return path


def write_manifest(directory: str, command: str, files: dict, failures, status: int):
    '''Writes manifest.json with the rows written per file and every failure.

    files: {file name: rows written}.
    failures: [{"key": ..., "error": ..., "text": ...}].
    '''
    os.makedirs(directory, exist_ok=True)
    manifest = {"command": command, "files": files, "failures": plain(list(failures)), "status": status}
    with open(os.path.join(directory, "manifest.json"), "w", encoding="utf-8") as handle:
        handle.write(json.dumps(manifest, indent=2, sort_keys=True))
        handle.write("\n")


# ----------------------------------------------------------------------------
