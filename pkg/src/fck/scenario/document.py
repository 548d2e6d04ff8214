"""Scenario documents: XML grammar, validation, serialization and diffs.

Grammar (element names follow the reference XML dialect)::

    <simulation>
      <control> duration seed decay solver </control>
      <recipe> name basis <nuclide><id/><comp/></nuclide>... </recipe>
      <prototype> name [lifetime] <config><Archetype>...</Archetype></config> </prototype>
      <region> name [lifetime] <config><Archetype/></config>
        <institution> name [lifetime]
          <initialfacilitylist><entry><prototype/><number/></entry>...</initialfacilitylist>
          <config><Archetype/></config>
        </institution>
      </region>
    </simulation>

Inside an archetype config a list of scalars is written as
``<field><val>a</val><val>b</val></field>`` and a list of blocks as
repeated ``<field>`` elements. Any scalar may carry a ``units`` attribute.
"""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from fck.kernel.registry import ARCHETYPES, lookup
from fck.resources.nuclides import NuclideError, alias, nucid
from fck.scenario.schema import Field, References, SchemaError, check

CONTROL = (
    Field("duration", "int", min=0),
    Field("seed", "int", 0),
    Field("decay", "str", "manual", choices=("manual", "never", "lazy")),
    Field("solver", "str", "greedy", choices=("greedy", "lp", "exact")),
)

RECIPE_TOL = 1e-6


class ScenarioError(SchemaError):
    pass


@dataclass
class Recipe:
    name: str
    basis: str
    fractions: dict[int, float]


@dataclass
class PrototypeDoc:
    name: str
    archetype: str
    config: dict[str, Any]
    lifetime: int | None = None


@dataclass
class InstitutionDoc:
    name: str
    archetype: str
    config: dict[str, Any]
    initial: list[tuple[str, int]] = field(default_factory=list)
    lifetime: int | None = None


@dataclass
class RegionDoc:
    name: str
    archetype: str
    config: dict[str, Any]
    institutions: list[InstitutionDoc] = field(default_factory=list)
    lifetime: int | None = None


@dataclass
class ScenarioDoc:
    control: dict[str, Any]
    recipes: list[Recipe] = field(default_factory=list)
    prototypes: list[PrototypeDoc] = field(default_factory=list)
    regions: list[RegionDoc] = field(default_factory=list)

    def prototype(self, name: str) -> PrototypeDoc:
        for p in self.prototypes:
            if p.name == name:
                return p
        raise KeyError(name)


# XML -> raw values -------------------------------------------------------

def _text(elem: ET.Element) -> str:
    return (elem.text or "").strip()


def _scalar_raw(elem: ET.Element):
    units = elem.get("units")
    return (_text(elem), units) if units else _text(elem)


def _config_raw(fields, elem: ET.Element, path: str, errors: list[str]) -> dict:
    by_name = {f.name: f for f in fields}
    raw: dict[str, Any] = {}
    for child in elem:
        f = by_name.get(child.tag)
        sub = f"{path}/{child.tag}"
        if f is None:
            errors.append(f"{sub}: unknown field")
            continue
        if f.type == "nested":
            value = _config_raw(f.fields, child, sub, errors)
            if f.many:
                raw.setdefault(f.name, []).append(value)
            elif f.name in raw:
                errors.append(f"{sub}: given more than once")
            else:
                raw[f.name] = value
        elif f.many:
            vals = [_scalar_raw(v) for v in child if v.tag == "val"]
            if not vals and len(child) == 0 and _text(child):
                vals = [_scalar_raw(child)]
            raw.setdefault(f.name, []).extend(vals)
        elif f.name in raw:
            errors.append(f"{sub}: given more than once")
        else:
            raw[f.name] = _scalar_raw(child)
    return raw


def _child_text(elem: ET.Element, tag: str, path: str, errors: list[str],
                required: bool = True) -> str | None:
    found = elem.findall(tag)
    if not found:
        if required:
            errors.append(f"{path}/{tag}: required element missing")
        return None
    if len(found) > 1:
        errors.append(f"{path}/{tag}: given more than once")
    return _text(found[0])


def _lifetime(elem: ET.Element, path: str, errors: list[str]) -> int | None:
    text = _child_text(elem, "lifetime", path, errors, required=False)
    if text is None:
        return None
    try:
        value = int(text)
    except ValueError:
        errors.append(f"{path}/lifetime: expected int, got {text!r}")
        return None
    if value <= 0:
        errors.append(f"{path}/lifetime: must be > 0")
    return value


def _agent_config(elem: ET.Element, path: str, kind: str, errors: list[str],
                  refs: References) -> tuple[str, dict]:
    cfg = elem.find("config")
    if cfg is None or len(cfg) != 1:
        errors.append(f"{path}/config: expected exactly one archetype element")
        return "", {}
    arch_elem = cfg[0]
    name = arch_elem.tag
    sub = f"{path}/config/{name}"
    try:
        cls = lookup(name)
    except KeyError:
        errors.append(f"{sub}: unknown archetype {name!r} (known: {', '.join(sorted(ARCHETYPES))})")
        return name, {}
    if cls.kind != kind:
        errors.append(f"{sub}: archetype {name!r} is a {cls.kind}, expected a {kind}")
    raw = _config_raw(cls.schema, arch_elem, sub, errors)
    return name, check(cls.schema, raw, sub, errors, refs)


def _parse_recipe(elem: ET.Element, idx: int, errors: list[str]) -> Recipe:
    name = _child_text(elem, "name", f"recipe[{idx}]", errors) or f"#{idx}"
    path = f"recipe[{name}]"
    basis = _child_text(elem, "basis", path, errors, required=False) or "mass"
    if basis not in ("mass", "atom"):
        errors.append(f"{path}/basis: expected 'mass' or 'atom', got {basis!r}")
    fractions: dict[int, float] = {}
    for k, nuc in enumerate(elem.findall("nuclide")):
        sub = f"{path}/nuclide[{k}]"
        nid_text = _child_text(nuc, "id", sub, errors)
        comp_text = _child_text(nuc, "comp", sub, errors)
        if nid_text is None or comp_text is None:
            continue
        try:
            nid = nucid(nid_text)
        except NuclideError as exc:
            errors.append(f"{sub}/id: {exc}")
            continue
        try:
            value = float(comp_text)
        except ValueError:
            errors.append(f"{sub}/comp: expected float, got {comp_text!r}")
            continue
        if not math.isfinite(value) or value < 0:
            errors.append(f"{sub}/comp: invalid fraction {value!r}")
            continue
        if nid in fractions:
            errors.append(f"{sub}/id: {alias(nid)} listed twice")
        fractions[nid] = value
    if not fractions:
        errors.append(f"{path}: no nuclides")
    elif basis == "mass" and abs(math.fsum(fractions.values()) - 1.0) > RECIPE_TOL:
        errors.append(f"{path}: mass fractions sum to {math.fsum(fractions.values())!r}, "
                      f"expected 1 within {RECIPE_TOL}")
    return Recipe(name, basis, fractions)


def parse_scenario(text: str) -> ScenarioDoc:
    """Parse and validate a scenario; raises :class:`ScenarioError` with every problem."""
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise ScenarioError([f"document: malformed XML ({exc})"]) from None
    if root.tag != "simulation":
        raise ScenarioError([f"document: root element must be <simulation>, got <{root.tag}>"])
    errors: list[str] = []
    refs = References()

    control_elem = root.find("control")
    if control_elem is None:
        errors.append("simulation/control: required element missing")
        control: dict[str, Any] = {}
    else:
        control = check(CONTROL, {c.tag: _scalar_raw(c) for c in control_elem},
                        "simulation/control", errors, refs)

    recipes = [_parse_recipe(e, i, errors) for i, e in enumerate(root.findall("recipe"))]

    prototypes = []
    for i, elem in enumerate(root.findall("prototype")):
        name = _child_text(elem, "name", f"prototype[{i}]", errors) or f"#{i}"
        path = f"prototype[{name}]"
        arch, cfg = _agent_config(elem, path, "Facility", errors, refs)
        prototypes.append(PrototypeDoc(name, arch, cfg, _lifetime(elem, path, errors)))

    regions = []
    for i, relem in enumerate(root.findall("region")):
        rname = _child_text(relem, "name", f"region[{i}]", errors) or f"#{i}"
        rpath = f"region[{rname}]"
        arch, cfg = _agent_config(relem, rpath, "Region", errors, refs)
        region = RegionDoc(rname, arch, cfg, lifetime=_lifetime(relem, rpath, errors))
        for j, ielem in enumerate(relem.findall("institution")):
            iname = _child_text(ielem, "name", f"{rpath}/institution[{j}]", errors) or f"#{j}"
            ipath = f"{rpath}/institution[{iname}]"
            iarch, icfg = _agent_config(ielem, ipath, "Institution", errors, refs)
            inst = InstitutionDoc(iname, iarch, icfg, lifetime=_lifetime(ielem, ipath, errors))
            for k, entry in enumerate(ielem.findall("initialfacilitylist/entry")):
                epath = f"{ipath}/initialfacilitylist/entry[{k}]"
                proto = _child_text(entry, "prototype", epath, errors)
                number = _child_text(entry, "number", epath, errors, required=False) or "1"
                try:
                    count = int(number)
                    if count < 1:
                        raise ValueError
                except ValueError:
                    errors.append(f"{epath}/number: expected a positive int, got {number!r}")
                    continue
                if proto is not None:
                    refs.prototypes.append((f"{epath}/prototype", proto))
                    inst.initial.append((proto, count))
            region.institutions.append(inst)
        regions.append(region)

    doc = ScenarioDoc(control, recipes, prototypes, regions)
    _cross_check(doc, refs, errors)
    if errors:
        raise ScenarioError(errors)
    return doc


def _cross_check(doc: ScenarioDoc, refs: References, errors: list[str]) -> None:
    seen: dict[str, str] = {}
    for r in doc.recipes:
        if r.name in seen:
            errors.append(f"recipe[{r.name}]: defined more than once")
        seen[r.name] = "recipe"
    names: set[str] = set()
    agents = [p.name for p in doc.prototypes]
    for reg in doc.regions:
        agents.append(reg.name)
        agents.extend(i.name for i in reg.institutions)
    for name in agents:
        if name in names:
            errors.append(f"prototype[{name}]: name used more than once")
        names.add(name)
    recipe_names = {r.name for r in doc.recipes}
    for path, name in refs.recipes:
        if name not in recipe_names:
            errors.append(f"{path}: undefined recipe {name!r}")
    facility_names = {p.name for p in doc.prototypes}
    for path, name in refs.prototypes:
        if name not in facility_names:
            errors.append(f"{path}: undefined prototype {name!r}")


def load_scenario(path: str | Path) -> ScenarioDoc:
    return parse_scenario(Path(path).read_text(encoding="utf-8"))


# doc -> XML ---------------------------------------------------------------

def _fmt_scalar(f: Field, value) -> str:
    if f.type == "bool":
        return "true" if value else "false"
    if f.type == "float":
        return repr(float(value))
    if f.type == "nuclide":
        return alias(value)
    return str(value)


def _config_xml(fields, cfg: dict, parent: ET.Element) -> None:
    for f in fields:
        value = cfg.get(f.name)
        if value is None:
            continue
        if f.type == "nested":
            for block in (value if f.many else [value]):
                _config_xml(f.fields, block, ET.SubElement(parent, f.name))
        elif f.many:
            if not value:
                continue
            holder = ET.SubElement(parent, f.name)
            for v in value:
                ET.SubElement(holder, "val").text = _fmt_scalar(f, v)
        else:
            ET.SubElement(parent, f.name).text = _fmt_scalar(f, value)


def _agent_xml(parent: ET.Element, tag: str, name: str, archetype: str, cfg: dict,
               lifetime: int | None) -> ET.Element:
    elem = ET.SubElement(parent, tag)
    ET.SubElement(elem, "name").text = name
    if lifetime is not None:
        ET.SubElement(elem, "lifetime").text = str(lifetime)
    config = ET.SubElement(elem, "config")
    _config_xml(lookup(archetype).schema, cfg, ET.SubElement(config, archetype))
    return elem


def serialize_scenario(doc: ScenarioDoc) -> str:
    root = ET.Element("simulation")
    control = ET.SubElement(root, "control")
    _config_xml(CONTROL, doc.control, control)
    for r in doc.recipes:
        elem = ET.SubElement(root, "recipe")
        ET.SubElement(elem, "name").text = r.name
        ET.SubElement(elem, "basis").text = r.basis
        for nid, value in r.fractions.items():
            nuc = ET.SubElement(elem, "nuclide")
            ET.SubElement(nuc, "id").text = alias(nid)
            ET.SubElement(nuc, "comp").text = repr(float(value))
    for p in doc.prototypes:
        _agent_xml(root, "prototype", p.name, p.archetype, p.config, p.lifetime)
    for reg in doc.regions:
        relem = _agent_xml(root, "region", reg.name, reg.archetype, reg.config, reg.lifetime)
        for inst in reg.institutions:
            ielem = _agent_xml(relem, "institution", inst.name, inst.archetype, inst.config,
                               inst.lifetime)
            if inst.initial:
                lst = ET.SubElement(ielem, "initialfacilitylist")
                for proto, count in inst.initial:
                    entry = ET.SubElement(lst, "entry")
                    ET.SubElement(entry, "prototype").text = proto
                    ET.SubElement(entry, "number").text = str(count)
    ET.indent(root, space="  ")
    return ET.tostring(root, encoding="unicode") + "\n"


# diffs --------------------------------------------------------------------

def _flatten(value, path: str, out: dict[str, Any]) -> None:
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(v, f"{path}/{k}", out)
    elif isinstance(value, list):
        for i, v in enumerate(value):
            _flatten(v, f"{path}[{i}]", out)
    else:
        out[path] = value


def flatten_doc(doc: ScenarioDoc) -> dict[str, Any]:
    out: dict[str, Any] = {}
    _flatten(doc.control, "control", out)
    for r in doc.recipes:
        out[f"recipe[{r.name}]/basis"] = r.basis
        for nid, v in r.fractions.items():
            out[f"recipe[{r.name}]/{alias(nid)}"] = v
    for p in doc.prototypes:
        base = f"prototype[{p.name}]"
        out[f"{base}/archetype"] = p.archetype
        out[f"{base}/lifetime"] = p.lifetime
        _flatten(p.config, f"{base}/config/{p.archetype}", out)
    for reg in doc.regions:
        base = f"region[{reg.name}]"
        out[f"{base}/archetype"] = reg.archetype
        out[f"{base}/lifetime"] = reg.lifetime
        _flatten(reg.config, f"{base}/config/{reg.archetype}", out)
        for inst in reg.institutions:
            ib = f"{base}/institution[{inst.name}]"
            out[f"{ib}/archetype"] = inst.archetype
            out[f"{ib}/lifetime"] = inst.lifetime
            _flatten(inst.config, f"{ib}/config/{inst.archetype}", out)
            for k, (proto, count) in enumerate(inst.initial):
                out[f"{ib}/initial[{k}]"] = (proto, count)
    return out


def diff_docs(a: ScenarioDoc, b: ScenarioDoc) -> list[tuple[str, Any, Any]]:
    """Every path whose value differs, as ``(path, value_in_a, value_in_b)``."""
    fa, fb = flatten_doc(a), flatten_doc(b)
    missing = object()
    out = []
    for path in sorted(set(fa) | set(fb)):
        va, vb = fa.get(path, missing), fb.get(path, missing)
        if va != vb:
            out.append((path, None if va is missing else va, None if vb is missing else vb))
    return out
