"""Experiment configuration files.

Grammar (a strict subset of INI)::

    # comment
    [run]
    experiment = fig3-sweep
    seed = 0
    n_realizations = 1000
    dt_override =            ; optional, ns
    fock_cutoff = 1
    output_path = results/fig3.csv
    json_mirror = false

    [parameters]
    t_c_GHz = 12
    sigma_tc_GHz = 0, 0.25, 0.5, 0.75

Only the ``[run]`` and ``[parameters]`` sections are allowed and every key
must be known; list values are comma separated. Frequencies are ordinary
frequencies (X/2pi) in GHz or MHz as the key suffix says, times are in ns.
"""
from configparser import ConfigParser, Error as ParserError
from dataclasses import dataclass, field
import math


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Param:
    kind: str  # float, floats, int, str
    default: object
    doc: str = ""
    choices: tuple = ()


RUN_KEYS = {
    "experiment": Param("str", None, "experiment name"),
    "seed": Param("int", 0, "master seed for noise sampling"),
    "n_realizations": Param("int", 1000, "quasistatic noise realizations per point"),
    "dt_override": Param("float", None, "fixed integration step in ns"),
    "fock_cutoff": Param("int", 1, "maximum resonator photon number"),
    "output_path": Param("str", "results.csv", "CSV destination"),
    "json_mirror": Param("bool", False, "also write a JSON copy of each table"),
}


@dataclass
class ExperimentConfig:
    experiment: str
    parameters: dict
    seed: int = 0
    n_realizations: int = 1000
    dt_override: float = None
    fock_cutoff: int = 1
    output_path: str = "results.csv"
    json_mirror: bool = False
    source: str = field(default="", repr=False)


def parse_value(kind, raw, key):
    raw = raw.strip()
    try:
        if kind == "float":
            return None if raw == "" else float(raw)
        if kind == "int":
            return int(raw)
        if kind == "bool":
            low = raw.lower()
            if low in ("true", "yes", "1", "on"):
                return True
            if low in ("false", "no", "0", "off"):
                return False
            raise ValueError(raw)
        if kind == "floats":
            return tuple(float(x) for x in raw.split(",") if x.strip())
        if kind == "str":
            return raw
    except ValueError:
        raise ConfigError(f"bad value for {key!r}: {raw!r} (expected {kind})") from None
    raise ConfigError(f"unknown parameter kind {kind}")


def format_value(kind, value):
    if value is None:
        return ""
    if kind == "floats":
        return ", ".join(repr(float(v)) for v in value)
    if kind == "bool":
        return "true" if value else "false"
    if kind == "float":
        return "inf" if math.isinf(value) else repr(float(value))
    return str(value)


def parse_config(text, schemas):
    """Parse config text; ``schemas`` maps experiment name -> {key: Param}."""
    cp = ConfigParser(interpolation=None, inline_comment_prefixes=(";",), empty_lines_in_values=False)
    cp.optionxform = str
    try:
        cp.read_string(text)
    except ParserError as exc:
        raise ConfigError(f"cannot parse config: {exc}") from None
    extra = set(cp.sections()) - {"run", "parameters"}
    if extra:
        raise ConfigError(f"unknown section(s): {', '.join(sorted(extra))}")
    if not cp.has_section("run"):
        raise ConfigError("missing [run] section")
    run = dict(cp.items("run"))
    unknown = set(run) - set(RUN_KEYS)
    if unknown:
        raise ConfigError(f"unknown [run] key(s): {', '.join(sorted(unknown))}")
    name = run.get("experiment", "").strip()
    if name not in schemas:
        raise ConfigError(f"unknown experiment {name!r}; choose from {', '.join(schemas)}")
    values = {k: p.default for k, p in RUN_KEYS.items()}
    for k, raw in run.items():
        values[k] = parse_value(RUN_KEYS[k].kind, raw, k)
    schema = schemas[name]
    params = {k: p.default for k, p in schema.items()}
    given = dict(cp.items("parameters")) if cp.has_section("parameters") else {}
    unknown = set(given) - set(schema)
    if unknown:
        raise ConfigError(f"unknown parameter(s) for {name}: {', '.join(sorted(unknown))}")
    for k, raw in given.items():
        p = schema[k]
        params[k] = parse_value(p.kind, raw, k)
        if p.choices and params[k] not in p.choices:
            raise ConfigError(f"{k} must be one of {', '.join(p.choices)}, got {params[k]!r}")
    if values["n_realizations"] < 1:
        raise ConfigError("n_realizations must be >= 1")
    if values["fock_cutoff"] < 1:
        raise ConfigError("fock_cutoff must be >= 1")
    if values["dt_override"] is not None and not values["dt_override"] > 0:
        raise ConfigError("dt_override must be positive")
    return ExperimentConfig(
        experiment=name,
        parameters=params,
        seed=values["seed"],
        n_realizations=values["n_realizations"],
        dt_override=values["dt_override"],
        fock_cutoff=values["fock_cutoff"],
        output_path=values["output_path"],
        json_mirror=values["json_mirror"],
        source=text,
    )


def load_config(path, schemas):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text, schemas)


def render_config(name, schema, run_overrides=None):
    """Config text holding the defaults for one experiment."""
    run = {k: p.default for k, p in RUN_KEYS.items()}
    run["experiment"] = name
    run["output_path"] = f"results/{name}.csv"
    run.update(run_overrides or {})
    lines = ["[run]"]
    for k, p in RUN_KEYS.items():
        lines.append(f"{k} = {format_value(p.kind, run[k])}")
    lines += ["", "[parameters]"]
    for k, p in schema.items():
        if p.doc:
            lines.append(f"# {p.doc}")
        lines.append(f"{k} = {format_value(p.kind, p.default)}")
    return "\n".join(lines) + "\n"
