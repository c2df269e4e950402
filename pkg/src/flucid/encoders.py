"""Evidence encoders.

Structured log records (field maps) become observation-sequence source
text, one observation per record, with hardware addresses, hostnames,
and timestamps normalized to canonical forms on the way in.  A small
line-oriented schema maps record fields onto context dimensions and
types; the per-service encodings (switch log, DHCP, netflow, ARP, port
scan) are shipped as schema presets.  A record field that refuses to
normalize does not abort the encoding: the offending value is kept raw
and that observation's credibility weight is downgraded instead.
"""

from __future__ import annotations

import hashlib
import os
import re
import time
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from .values import FlucidError, to_source

DEFAULT_PARTIAL_W = 0.5
TZ_ENV_VAR = "FLUCID_TZ"

FIELD_TYPES = ("text", "int", "real", "mac", "timestamp", "hostname")


class EncodeError(FlucidError):
    pass


# ---------------------------------------------------------------------------
# Normalizers
# ---------------------------------------------------------------------------

_MAC_RAW = re.compile(r"^[0-9a-fA-F]{12}$")
_MAC_SEP = re.compile(r"^([0-9a-fA-F]{1,2})([:-])"
                      r"([0-9a-fA-F]{1,2})\2([0-9a-fA-F]{1,2})\2"
                      r"([0-9a-fA-F]{1,2})\2([0-9a-fA-F]{1,2})\2"
                      r"([0-9a-fA-F]{1,2})$")
_MAC_DOTTED = re.compile(r"^([0-9a-fA-F]{4})\.([0-9a-fA-F]{4})\."
                         r"([0-9a-fA-F]{4})$")


def normalize_mac(s: str) -> str:
    """Canonical hardware address: lowercase, colon-separated, six
    zero-padded octets.  Accepts raw 12-hex, colon or dash separated
    (leading zeros optional), and four-hex dotted triplet forms."""
    raw = s.strip()
    if _MAC_RAW.match(raw):
        octets = [raw[i:i + 2] for i in range(0, 12, 2)]
    else:
        m = _MAC_SEP.match(raw)
        if m:
            groups = list(m.groups())
            groups.pop(1)                    # the separator capture
            octets = groups
        else:
            m = _MAC_DOTTED.match(raw)
            if m:
                joined = "".join(m.groups())
                octets = [joined[i:i + 2] for i in range(0, 12, 2)]
            else:
                raise EncodeError(
                    "unrecognized hardware address: %r" % s)
    return ":".join(o.lower().zfill(2) for o in octets)


def normalize_hostname(s: str) -> str:
    """Lowercase, trailing-dot-free host name."""
    raw = s.strip().rstrip(".").lower()
    if not raw or not re.match(r"^[a-z0-9._-]+$", raw):
        raise EncodeError("unrecognized host name: %r" % s)
    return raw


_MONTHS = ("Jan", "Feb", "Mar", "Apr", "May", "Jun",
           "Jul", "Aug", "Sep", "Oct", "Nov", "Dec")
_WDAYS = ("Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun")

# civil abbreviations appear in logs without IANA names; fixed offsets
_ZONE_OFFSETS = {
    "UTC": 0, "GMT": 0, "Z": 0,
    "EST": -5, "EDT": -4, "CST": -6, "CDT": -5,
    "MST": -7, "MDT": -6, "PST": -8, "PDT": -7,
    "CET": 1, "CEST": 2, "EET": 2, "EEST": 3,
}

_TS_SYSLOG = re.compile(
    r"^([A-Z][a-z]{2})\s+(\d{1,2})\s+(\d{2}):(\d{2}):(\d{2})$")
_TS_CANONICAL = re.compile(
    r"^[A-Z][a-z]{2}\s+([A-Z][a-z]{2})\s+(\d{1,2})\s+"
    r"(\d{2}):(\d{2}):(\d{2})\s+(\d{4})$")
_TS_ISO = re.compile(
    r"^(\d{4})-(\d{2})-(\d{2})[ T](\d{2}):(\d{2})(?::(\d{2}))?"
    r"(?:\.(\d{1,6}))?(?:\s+(\S+))?$")
_TS_COMPACT = re.compile(r"^(\d{4})(\d{2})(\d{2})(\d{2})(\d{2})$")
_TS_EPOCH = re.compile(r"^-?\d{1,18}$")


def _resolve_zone(name: Optional[str]):
    if name is None:
        name = os.environ.get(TZ_ENV_VAR) or "UTC"
    offset = _ZONE_OFFSETS.get(name.upper() if len(name) <= 4 else name)
    if offset is not None:
        return timezone(timedelta(hours=offset), name)
    try:
        from zoneinfo import ZoneInfo
        return ZoneInfo(name)
    except Exception:
        raise EncodeError("unknown time zone: %r" % name)


def _month_number(abbrev: str) -> int:
    try:
        return _MONTHS.index(abbrev) + 1
    except ValueError:
        raise EncodeError("unknown month: %r" % abbrev)


def render_timestamp(epoch: int, tz: Optional[str] = None) -> str:
    """Canonical human form for an epoch second in the given zone."""
    dt = datetime.fromtimestamp(epoch, _resolve_zone(tz))
    return "%s %s %d %02d:%02d:%02d %d" % (
        _WDAYS[dt.weekday()], _MONTHS[dt.month - 1], dt.day,
        dt.hour, dt.minute, dt.second, dt.year)


def normalize_timestamp(s: Any, reference_year: Optional[int] = None,
                        tz: Optional[str] = None) -> Tuple[str, int]:
    """(canonical text, epoch seconds) for a textual timestamp.

    Accepted forms: syslog "Mon DD HH:MM:SS" (year supplied by
    reference_year, 1970 when absent), ISO "YYYY-MM-DD HH:MM[:SS]
    [ZONE]" with optional fractional seconds, compact "YYYYMMDDHHMM",
    a bare epoch integer, and this function's own canonical output.
    Zoneless forms are interpreted in tz (or the FLUCID_TZ environment
    variable, or UTC); the canonical text is always rendered there.
    """
    if isinstance(s, int):
        return render_timestamp(s, tz), s
    raw = str(s).strip()
    zone = _resolve_zone(tz)

    def done(dt: datetime) -> Tuple[str, int]:
        epoch = int(dt.timestamp())
        return render_timestamp(epoch, tz), epoch

    try:
        m = _TS_SYSLOG.match(raw)
        if m:
            year = reference_year if reference_year is not None else 1970
            return done(datetime(
                year, _month_number(m.group(1)), int(m.group(2)),
                int(m.group(3)), int(m.group(4)), int(m.group(5)),
                tzinfo=zone))

        m = _TS_CANONICAL.match(raw)
        if m:
            return done(datetime(
                int(m.group(6)), _month_number(m.group(1)),
                int(m.group(2)), int(m.group(3)), int(m.group(4)),
                int(m.group(5)), tzinfo=zone))

        m = _TS_ISO.match(raw)
        if m:
            seconds = int(m.group(6)) if m.group(6) else 0
            z = _resolve_zone(m.group(8)) if m.group(8) else zone
            return done(datetime(
                int(m.group(1)), int(m.group(2)), int(m.group(3)),
                int(m.group(4)), int(m.group(5)), seconds, tzinfo=z))

        # twelve digits read as a calendar stamp when the fields are in
        # range, as a raw epoch second otherwise
        m = _TS_COMPACT.match(raw)
        if m:
            return done(datetime(
                int(m.group(1)), int(m.group(2)), int(m.group(3)),
                int(m.group(4)), int(m.group(5)), tzinfo=zone))
    except ValueError:
        if not _TS_EPOCH.match(raw):
            raise EncodeError("unrecognized timestamp: %r" % s)

    if _TS_EPOCH.match(raw):
        epoch = int(raw)
        return render_timestamp(epoch, tz), epoch

    raise EncodeError("unrecognized timestamp: %r" % s)


# ---------------------------------------------------------------------------
# Schemas
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldSpec:
    field: str
    dimension: str
    type: str


@dataclass(frozen=True)
class Schema:
    fields: Tuple[FieldSpec, ...]
    partial_w: float = DEFAULT_PARTIAL_W


_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_SCHEMA_FIELD = re.compile(
    r"^field\s+(\S+)\s*->\s*dimension\s+(\S+)\s+type\s+(\S+)$")
_SCHEMA_PARTIAL = re.compile(r"^partial\s+([0-9.]+)$")


def parse_schema(text: str) -> Schema:
    """Line-oriented schema: `field <name> -> dimension <name> type
    <text|int|real|mac|timestamp|hostname>`, optional `partial <w>`."""
    fields: List[FieldSpec] = []
    partial = DEFAULT_PARTIAL_W
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("//")[0].split("#")[0].strip()
        if not body:
            continue
        m = _SCHEMA_FIELD.match(body)
        if m:
            fname, dname, ftype = m.groups()
            if ftype not in FIELD_TYPES:
                raise EncodeError(
                    "schema line %d: unknown type %r (one of %s)"
                    % (lineno, ftype, "/".join(FIELD_TYPES)))
            if not _IDENT.match(dname):
                raise EncodeError(
                    "schema line %d: %r is not a dimension name"
                    % (lineno, dname))
            if any(f.field == fname for f in fields):
                raise EncodeError(
                    "schema line %d: field %r declared twice"
                    % (lineno, fname))
            fields.append(FieldSpec(fname, dname, ftype))
            continue
        m = _SCHEMA_PARTIAL.match(body)
        if m:
            partial = float(m.group(1))
            if not 0.0 <= partial <= 1.0:
                raise EncodeError(
                    "schema line %d: partial credibility must be in "
                    "[0, 1]" % lineno)
            continue
        raise EncodeError("schema line %d: cannot read %r" % (lineno, body))
    if not fields:
        raise EncodeError("schema declares no fields")
    return Schema(tuple(fields), partial)


PRESETS: Dict[str, Schema] = {
    "arp": parse_schema(
        "field ipaddr -> dimension ipaddr type text\n"
        "field mac -> dimension mac type mac\n"),
    "switchlog": parse_schema(
        "field ts -> dimension ts type timestamp\n"
        "field port -> dimension port type text\n"
        "field mac -> dimension mac type mac\n"
        "field message -> dimension message type text\n"),
    "dhcp": parse_schema(
        "field ts -> dimension ts type timestamp\n"
        "field ipaddr -> dimension ipaddr type text\n"
        "field mac -> dimension mac type mac\n"
        "field hostname -> dimension hostname type hostname\n"),
    "netflow": parse_schema(
        "field ts -> dimension ts type timestamp\n"
        "field srcip -> dimension srcip type text\n"
        "field dstip -> dimension dstip type text\n"
        "field srcport -> dimension srcport type int\n"
        "field dstport -> dimension dstport type int\n"
        "field proto -> dimension proto type text\n"
        "field bytes -> dimension bytes type int\n"),
    "scan": parse_schema(
        "field host -> dimension host type hostname\n"
        "field port -> dimension port type int\n"
        "field state -> dimension state type text\n"
        "field service -> dimension service type text\n"),
}


def load_schema(name_or_path: str) -> Schema:
    """A preset name, or a path to a schema file."""
    if name_or_path in PRESETS:
        return PRESETS[name_or_path]
    if os.path.exists(name_or_path):
        with open(name_or_path, "r", encoding="utf-8") as fh:
            return parse_schema(fh.read())
    raise EncodeError(
        "no schema preset or file named %r (presets: %s)"
        % (name_or_path, ", ".join(sorted(PRESETS))))


# ---------------------------------------------------------------------------
# Encoding
# ---------------------------------------------------------------------------


def _normalize_field(spec: FieldSpec, value: Any,
                     reference_year: Optional[int], tz: Optional[str]):
    """(tag value, epoch-or-None, ok?) for one field of one record."""
    if spec.type == "text":
        return str(value), None, True
    try:
        if spec.type == "mac":
            return normalize_mac(str(value)), None, True
        if spec.type == "hostname":
            return normalize_hostname(str(value)), None, True
        if spec.type == "int":
            return int(str(value).strip(), 0), None, True
        if spec.type == "real":
            return float(str(value).strip()), None, True
        if spec.type == "timestamp":
            text, epoch = normalize_timestamp(value, reference_year, tz)
            return text, epoch, True
    except (EncodeError, ValueError):
        return str(value), None, False
    raise AssertionError(spec.type)


def encode_log(lines: Iterable[Dict[str, Any]], name: str, source: str,
               schema: Schema = PRESETS["arp"], *,
               reference_year: Optional[int] = None,
               tz: Optional[str] = None,
               now: Optional[int] = None) -> str:
    """Observation-sequence source text for the given records.

    One observation per record: the property is the normalized
    dimension:tag pair set, durations (1, 0), weight 1.0 unless a field
    failed to normalize (then the schema's partial credibility), and the
    timestamp slot filled from the first timestamp-typed field.  Zero
    records encode as a single no-observation.  The result is a complete
    program whose head demands the sequence.
    """
    if not _IDENT.match(name):
        raise EncodeError("%r is not usable as a sequence name" % name)
    records = list(lines)
    stamp = int(time.time()) if now is None else now
    out: List[str] = []
    out.append("%s" % name)
    out.append("where")
    out.append("  // encoded %s (%d) from %s"
               % (render_timestamp(stamp, tz), stamp, source))
    obs_names: List[str] = []
    epochs: List[Optional[int]] = []
    for pos, record in enumerate(records, 1):
        obs_name = "%s_o_%d" % (name, pos)
        obs_names.append(obs_name)
        pairs: List[str] = []
        weight = 1.0
        when: Optional[int] = None
        for spec in schema.fields:
            if spec.field not in record:
                continue
            tag, epoch, ok = _normalize_field(
                spec, record[spec.field], reference_year, tz)
            if not ok:
                weight = schema.partial_w
            if epoch is not None and when is None:
                when = epoch
                continue            # the t slot carries it, not the pair set
            pairs.append("%s:%s" % (spec.dimension, to_source(tag)))
        epochs.append(when)
        if not pairs and when is None:
            out.append("  observation %s = $;" % obs_name)
            continue
        parts = ["[%s]" % ", ".join(pairs) if pairs else "[]",
                 "1", "0", to_source(weight)]
        if when is not None:
            parts.append(str(when))
        out.append("  observation %s = (%s);" % (obs_name, ", ".join(parts)))
    if not records:
        obs_names.append("%s_o_1" % name)
        out.append("  observation %s_o_1 = $;" % name)
    known = [e for e in epochs if e is not None]
    if len(known) == len(epochs) and known and \
            any(a > b for a, b in zip(known, known[1:])):
        out.insert(3, "  // warning: timestamps are not non-decreasing")
    out.append("  observation sequence %s = {%s};"
               % (name, ", ".join(obs_names)))
    out.append("end")
    text = "\n".join(out) + "\n"
    _round_trip_gate(text)
    return text


def _round_trip_gate(text: str) -> None:
    # every emitted program must survive its own front end
    from .semantics import analyze
    from .syntax import parse
    analyze(parse(text))


def encode_to_files(lines: Iterable[Dict[str, Any]], case: str,
                    source: str, schema: Schema, out_dir: str = ".",
                    **kw) -> Tuple[str, str]:
    """Write `<case>.<source>.ctx` plus its checksum sidecar; returns
    both paths."""
    for part, label in ((case, "case"), (source, "source")):
        if not _IDENT.match(part):
            raise EncodeError("%r is not usable as a %s tag" % (part, label))
    text = encode_log(lines, source, "%s/%s" % (case, source), schema, **kw)
    ctx_path = os.path.join(out_dir, "%s.%s.ctx" % (case, source))
    with open(ctx_path, "w", encoding="utf-8") as fh:
        fh.write(text)
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    sha_path = ctx_path + ".sha256"
    with open(sha_path, "w", encoding="utf-8") as fh:
        fh.write("%s  %s\n" % (digest, os.path.basename(ctx_path)))
    return ctx_path, sha_path
