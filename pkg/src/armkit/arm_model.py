"""Arm description: joints, links, servos and the JSON config that carries them."""

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path

from .errors import ConfigError

STANDARD_GRAVITY = 9.80665


class JointKind(str, Enum):
    PLANAR = "planar"
    CYLINDRICAL = "cylindrical"
    PRISMATIC = "prismatic"
    REVOLUTE = "revolute"

    @property
    def freedoms(self):
        return _FREEDOMS[self]


# lower-pair freedom counts; a planar pair is two translations plus one rotation
_FREEDOMS = {
    JointKind.PLANAR: 3,
    JointKind.CYLINDRICAL: 2,
    JointKind.PRISMATIC: 1,
    JointKind.REVOLUTE: 1,
}


def joint_freedoms(kind):
    return JointKind(kind).freedoms


@dataclass(frozen=True)
class ServoSpec:
    name: str
    rated_torque: float  # N*m
    max_speed: float  # RPM
    rotation_range: float  # degrees
    deg_per_pulse: float  # degrees
    voltage: float  # V


@dataclass(frozen=True)
class LinkSpec:
    length: float  # m
    mass: float  # kg


@dataclass(frozen=True)
class Joint:
    name: str
    kind: JointKind
    link: LinkSpec
    servo: ServoSpec


@dataclass(frozen=True)
class Battery:
    capacity_mah: float
    voltage: float


@dataclass(frozen=True)
class PlatformSpec:
    """Optional vehicle-level figures carried for reporting only."""

    weight_kg: float | None = None
    operating_time_min: float | None = None


@dataclass(frozen=True)
class ArmDescription:
    name: str
    joints: tuple
    battery: Battery
    gravity: float = STANDARD_GRAVITY
    platform: PlatformSpec = field(default_factory=PlatformSpec)

    def __post_init__(self):
        object.__setattr__(self, "joints", tuple(self.joints))

    def __len__(self):
        return len(self.joints)

    def joint(self, name):
        for j in self.joints:
            if j.name == name:
                return j
        raise KeyError(name)

    @property
    def joint_names(self):
        return tuple(j.name for j in self.joints)


# ---------------------------------------------------------------- parsing

_TOP_KEYS = {"name", "gravity_mps2", "battery", "joints", "platform"}
_JOINT_KEYS = {"name", "kind", "link", "servo"}
_LINK_KEYS = {"length_m", "mass_kg"}
_SERVO_KEYS = {"rated_torque_nm", "max_speed_rpm", "rotation_range_deg",
               "deg_per_pulse", "voltage_v"}
_BATTERY_KEYS = {"capacity_mah", "voltage_v"}
_PLATFORM_KEYS = {"weight_kg", "operating_time_min"}


def _obj(value, path, required, optional=frozenset()):
    if not isinstance(value, dict):
        raise ConfigError(path or "<root>", "expected an object")
    for key in sorted(required):
        if key not in value:
            raise ConfigError(f"{path}.{key}" if path else key, "missing field")
    unknown = set(value) - set(required) - set(optional)
    if unknown:
        key = sorted(unknown)[0]
        raise ConfigError(f"{path}.{key}" if path else key, "unknown field")
    return value


def _number(value, path, *, positive=False):
    # bool is an int subclass; reject it explicitly
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(path, "expected a number")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(path, "non-finite physical quantity")
    if positive and value <= 0:
        raise ConfigError(path, "non-positive physical quantity")
    if value < 0:
        raise ConfigError(path, "negative physical quantity")
    return value


def _text(value, path):
    if not isinstance(value, str) or not value.strip():
        raise ConfigError(path, "expected a non-empty string")
    return value


def _parse_servo(raw, path, joint_name):
    raw = _obj(raw, path, _SERVO_KEYS)
    rotation_range = _number(raw["rotation_range_deg"], f"{path}.rotation_range_deg",
                             positive=True)
    if rotation_range > 360:
        raise ConfigError(f"{path}.rotation_range_deg", "must lie in (0, 360]")
    deg_per_pulse = _number(raw["deg_per_pulse"], f"{path}.deg_per_pulse", positive=True)
    if deg_per_pulse > rotation_range:
        raise ConfigError(f"{path}.deg_per_pulse", "exceeds rotation_range_deg")
    return ServoSpec(
        name=joint_name,
        rated_torque=_number(raw["rated_torque_nm"], f"{path}.rated_torque_nm", positive=True),
        max_speed=_number(raw["max_speed_rpm"], f"{path}.max_speed_rpm", positive=True),
        rotation_range=rotation_range,
        deg_per_pulse=deg_per_pulse,
        voltage=_number(raw["voltage_v"], f"{path}.voltage_v", positive=True),
    )


def _parse_joint(raw, path):
    raw = _obj(raw, path, _JOINT_KEYS)
    name = _text(raw["name"], f"{path}.name")
    kind = raw["kind"]
    try:
        kind = JointKind(kind)
    except ValueError:
        choices = ", ".join(k.value for k in JointKind)
        raise ConfigError(f"{path}.kind", f"expected one of {choices}") from None
    link_raw = _obj(raw["link"], f"{path}.link", _LINK_KEYS)
    link = LinkSpec(
        length=_number(link_raw["length_m"], f"{path}.link.length_m"),
        mass=_number(link_raw["mass_kg"], f"{path}.link.mass_kg"),
    )
    return Joint(name, kind, link, _parse_servo(raw["servo"], f"{path}.servo", name))


def arm_from_dict(doc):
    doc = _obj(doc, "", {"name", "battery", "joints"}, _TOP_KEYS)
    name = _text(doc["name"], "name")
    gravity = STANDARD_GRAVITY
    if "gravity_mps2" in doc:
        gravity = _number(doc["gravity_mps2"], "gravity_mps2", positive=True)

    bat = _obj(doc["battery"], "battery", _BATTERY_KEYS)
    battery = Battery(
        capacity_mah=_number(bat["capacity_mah"], "battery.capacity_mah", positive=True),
        voltage=_number(bat["voltage_v"], "battery.voltage_v", positive=True),
    )

    platform = PlatformSpec()
    if "platform" in doc:
        plat = _obj(doc["platform"], "platform", (), _PLATFORM_KEYS)
        platform = PlatformSpec(**{
            key: _number(plat[key], f"platform.{key}", positive=True) for key in plat
        })

    raw_joints = doc["joints"]
    if not isinstance(raw_joints, list):
        raise ConfigError("joints", "expected an array")
    if not raw_joints:
        raise ConfigError("joints", "at least one joint is required")
    joints = []
    seen = set()
    for i, raw in enumerate(raw_joints):
        joint = _parse_joint(raw, f"joints[{i}]")
        if joint.name in seen:
            raise ConfigError(f"joints[{i}].name", f"duplicate joint name {joint.name!r}")
        seen.add(joint.name)
        joints.append(joint)

    return ArmDescription(name=name, joints=tuple(joints), battery=battery,
                          gravity=gravity, platform=platform)


def load_arm(config_text):
    """Parse and validate a JSON arm document.

    Raises :class:`ConfigError` whose ``param`` attribute is the dotted path
    of the offending field (``joints[2].servo.rated_torque_nm``).
    """
    try:
        doc = json.loads(config_text)
    except json.JSONDecodeError as exc:
        raise ConfigError("<document>", f"parse failure: {exc.msg} at line {exc.lineno}") from None
    return arm_from_dict(doc)


def load_arm_file(path):
    return load_arm(Path(path).read_text(encoding="utf-8"))


def arm_to_dict(arm):
    doc = {"name": arm.name, "gravity_mps2": arm.gravity,
           "battery": {"capacity_mah": arm.battery.capacity_mah,
                       "voltage_v": arm.battery.voltage}}
    plat = {k: v for k, v in (("weight_kg", arm.platform.weight_kg),
                              ("operating_time_min", arm.platform.operating_time_min))
            if v is not None}
    if plat:
        doc["platform"] = plat
    doc["joints"] = [
        {"name": j.name, "kind": j.kind.value,
         "link": {"length_m": j.link.length, "mass_kg": j.link.mass},
         "servo": {"rated_torque_nm": j.servo.rated_torque,
                   "max_speed_rpm": j.servo.max_speed,
                   "rotation_range_deg": j.servo.rotation_range,
                   "deg_per_pulse": j.servo.deg_per_pulse,
                   "voltage_v": j.servo.voltage}}
        for j in arm.joints
    ]
    return doc


def dump_arm(arm):
    return json.dumps(arm_to_dict(arm), indent=2) + "\n"


SAMPLE_CONFIG = "sigma3.json"


def sample_arm_text():
    return resources.files("armkit.data").joinpath(SAMPLE_CONFIG).read_text(encoding="utf-8")


def sample_arm():
    """The bundled six-joint reference arm."""
    return load_arm(sample_arm_text())
