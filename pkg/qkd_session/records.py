"""
会话记录：振子角色、Alice 的私有记录、会话报告
"""
from dataclasses import dataclass, field, asdict
from enum import Enum
from typing import Dict, Any, List, Optional

from quantum_channel.homodyne import HomodyneOutcome

EXIT_KEY = 0
EXIT_ERROR = 1
EXIT_GATE_ABORT = 2
EXIT_CONDITIONING_ABORT = 3


class Role(Enum):
    """振子角色"""
    KEY = "key"
    BITCHECK = "bitcheck"
    CHECK = "check"      # 压缩检验态（测 p）
    PROBE = "probe"      # 相干探针（测 p）

    @property
    def quadrature(self) -> str:
        return "x" if self in (Role.KEY, Role.BITCHECK) else "p"

    @property
    def discloses(self) -> bool:
        return self is not Role.KEY


class Verdict(Enum):
    KEY = "key"
    GATE_ABORT = "abort-gate"
    CONDITIONING_ABORT = "abort-conditioning"

    @property
    def exit_code(self) -> int:
        return {
            Verdict.KEY: EXIT_KEY,
            Verdict.GATE_ABORT: EXIT_GATE_ABORT,
            Verdict.CONDITIONING_ABORT: EXIT_CONDITIONING_ABORT,
        }[self]


@dataclass
class OscillatorRecord:
    index: int
    role: Role
    alice_x: float
    alice_p: float
    probe_index: Optional[int] = None
    disclosed: Optional[float] = None
    bob_outcome: Optional[HomodyneOutcome] = None

    def __post_init__(self):
        if self.role is Role.KEY and self.disclosed is not None:
            raise ValueError("密钥振子的 x 不能公开")


@dataclass
class SliceResult:
    index: int
    e_b: float
    e_b_upper: float
    e_p: float
    rate: float
    expected_failed_blocks: float
    disclosed: bool
    blocks: int = 0
    key_bits: int = 0
    residual_errors: int = 0


@dataclass
class SessionReport:
    verdict: Verdict
    e_b: float
    e_b_halfwidth: float
    phi: Optional[float]
    gate_rate: Optional[float]
    phase_route: str
    seed: Optional[int]
    config: Dict[str, Any]
    slices: List[SliceResult] = field(default_factory=list)
    alice_key: str = ""
    bob_key: str = ""
    key_length: int = 0
    key_agreement: bool = False
    leaked_bits: int = 0
    diagnostics: Dict[str, Any] = field(default_factory=dict)
    resources: Dict[str, Any] = field(default_factory=dict)
    elapsed_seconds: float = 0.0

    @property
    def exit_code(self) -> int:
        return self.verdict.exit_code

    def to_dict(self, volatile: bool = True) -> Dict[str, Any]:
        """volatile=False 时去掉资源快照与耗时，同一种子下输出逐字节一致"""
        data = asdict(self)
        data["verdict"] = self.verdict.value
        data["exit_code"] = self.exit_code
        if not volatile:
            data.pop("resources")
            data.pop("elapsed_seconds")
        return data
