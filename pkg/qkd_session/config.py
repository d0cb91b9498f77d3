"""
会话配置：JSON -> 冻结的 SessionConfig
未知字段直接拒绝，避免拼写错误被静默忽略
"""
import json
import logging
from dataclasses import dataclass, field, fields, asdict
from pathlib import Path
from typing import Dict, Any, Optional, Tuple, Union

from bit_encoding.periodic import spacings_for_alpha
from bit_encoding.slices import LABELINGS, DECODE_RULES
from key_rates.published import MODULATION_VARIANCE, published_phase_errors
from quantum_channel.models import ChannelModel, parse_channel
from core_math.conventions import DomainError
from css_codes.matrices import NestedCodePair, CodeError
from css_codes.library import nested_pair
from css_codes.loader import load_nested_pair
from phase_estimator.probes import DEFAULT_EPS_MAX, DEFAULT_COND_MAX
from phase_estimator.estimator import DEFAULT_RATIO_MIN
from .settings import LabSettings

logger = logging.getLogger(__name__)

PHASE_ROUTES = ("squeezed-checks", "coherent-probes")


class ConfigError(ValueError):
    """会话配置不合法"""


@dataclass(frozen=True)
class SliceConfig:
    m: int = 2
    labeling: str = "binary"
    decode: str = "map-sbar"


@dataclass(frozen=True)
class SessionConfig:
    n_key: int = 2000
    n_bitcheck: int = 1000
    phase_route: str = "squeezed-checks"
    # squeezed-checks：压缩检验振子个数
    n_checks: int = 1000
    # coherent-probes：每个探针的拷贝数 M，K = (cutoff+1)^2
    probe_copies: int = 10000
    cutoff: int = 1
    eps_max: float = DEFAULT_EPS_MAX
    cond_max: float = DEFAULT_COND_MAX
    cond_ratio: float = DEFAULT_RATIO_MIN
    test_centers: Optional[Tuple[float, ...]] = None

    v_mod: float = MODULATION_VARIANCE
    alpha: float = 1.0
    spacing_x: Optional[float] = None
    spacing_p: Optional[float] = None
    squeezing_db: float = 6.0

    slices: SliceConfig = field(default_factory=SliceConfig)
    channel: Dict[str, Any] = field(default_factory=lambda: {"type": "lossless"})
    codes: Dict[str, Any] = field(default_factory=lambda: {"name": "hamming7"})
    e_p_slices: Optional[Tuple[float, ...]] = None
    verify_fraction: float = 0.5
    max_failed_blocks: float = 0.1
    seed: Optional[int] = None

    # ---------- 派生量 ----------

    @property
    def probe_count(self) -> int:
        return (self.cutoff + 1) ** 2

    @property
    def n_phase(self) -> int:
        """相位检验占用的振子数：nu 或 K*M"""
        if self.phase_route == "coherent-probes":
            return self.probe_count * self.probe_copies
        return self.n_checks

    @property
    def total_oscillators(self) -> int:
        """g = N + mu + nu"""
        return self.n_key + self.n_bitcheck + self.n_phase

    @property
    def bin_spacings(self) -> Tuple[float, float]:
        default_x, default_p = spacings_for_alpha(self.alpha)
        return (self.spacing_x if self.spacing_x is not None else default_x,
                self.spacing_p if self.spacing_p is not None else default_p)

    @property
    def phase_errors(self) -> Tuple[float, ...]:
        """各切片 e_p：缺省为已发表 0 dB 列（切片 1 用修正值）"""
        if self.e_p_slices is not None:
            return tuple(self.e_p_slices)
        values = published_phase_errors(0.0, corrected=True)
        return tuple(v for v in values[:self.slices.m])

    def build_channel(self) -> ChannelModel:
        return parse_channel(self.channel)

    def build_codes(self) -> NestedCodePair:
        if "h1_file" in self.codes:
            return load_nested_pair(self.codes["h1_file"], self.codes["h2_file"],
                                    name=self.codes.get("name", "file"))
        return nested_pair(self.codes.get("name", "hamming7"))

    # ---------- 校验 ----------

    def validate(self):
        """检查不变量，失败抛 ConfigError"""
        problems = []
        if self.n_key < 1:
            problems.append(f"n_key 必须 >= 1: {self.n_key}")
        if self.n_bitcheck < 1:
            problems.append(f"n_bitcheck (mu) 必须 >= 1: {self.n_bitcheck}")
        if self.phase_route not in PHASE_ROUTES:
            problems.append(f"未知 phase_route: {self.phase_route}")
        if self.phase_route == "squeezed-checks" and self.n_checks < 1:
            problems.append(f"n_checks 必须 >= 1: {self.n_checks}")
        if self.phase_route == "coherent-probes" and self.probe_copies < 1:
            problems.append(f"probe_copies 必须 >= 1: {self.probe_copies}")
        if self.cutoff < 0:
            problems.append(f"cutoff 必须非负: {self.cutoff}")
        if not 0.0 < self.eps_max < 0.1:
            problems.append(f"eps_max 必须在 (0, 0.1): {self.eps_max}")
        if self.v_mod <= 0:
            problems.append(f"v_mod 必须为正: {self.v_mod}")
        if self.alpha <= 0:
            problems.append(f"alpha 必须为正: {self.alpha}")
        if any(s <= 0 for s in self.bin_spacings):
            problems.append(f"分箱间距必须为正: {self.bin_spacings}")
        if self.squeezing_db <= 0:
            problems.append(f"squeezing_db 必须为正: {self.squeezing_db}")
        if not 1 <= self.slices.m <= 8:
            problems.append(f"切片数 m 必须在 1..8: {self.slices.m}")
        if self.slices.labeling not in LABELINGS:
            problems.append(f"未知 labeling: {self.slices.labeling}")
        if self.slices.decode not in DECODE_RULES:
            problems.append(f"未知解码规则: {self.slices.decode}")
        if not 0.0 < self.verify_fraction < 1.0:
            problems.append(f"verify_fraction 必须在 (0,1): {self.verify_fraction}")
        if self.max_failed_blocks <= 0:
            problems.append(f"max_failed_blocks 必须为正: {self.max_failed_blocks}")
        if self.total_oscillators > LabSettings.MAX_OSCILLATORS:
            problems.append(f"振子总数 {self.total_oscillators} 超过上限 {LabSettings.MAX_OSCILLATORS}")
        if self.e_p_slices is not None and len(self.e_p_slices) != self.slices.m:
            problems.append(f"e_p_slices 长度应为 {self.slices.m}")
        elif self.e_p_slices is None and self.slices.m > 2:
            problems.append("m > 2 时必须显式给出 e_p_slices")
        if any(not 0.0 <= e <= 1.0 for e in (self.e_p_slices or ())):
            problems.append(f"e_p_slices 必须在 [0,1]: {self.e_p_slices}")

        try:
            self.build_channel()
        except (DomainError, ValueError, TypeError) as e:
            problems.append(f"信道配置错误: {e}")
        try:
            self.build_codes()
        except (CodeError, KeyError) as e:
            problems.append(f"码配置错误: {e}")

        if problems:
            for p in problems:
                logger.error(f"❌ 配置错误: {p}")
            raise ConfigError("; ".join(problems))

    # ---------- 序列化 ----------

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SessionConfig':
        if not isinstance(data, dict):
            raise ConfigError("会话配置必须是 JSON 对象")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"未知配置字段: {', '.join(unknown)}")

        kwargs = dict(data)
        try:
            if "slices" in kwargs:
                slice_data = kwargs["slices"]
                slice_known = {f.name for f in fields(SliceConfig)}
                if set(slice_data) - slice_known:
                    raise ConfigError(f"未知切片字段: {', '.join(sorted(set(slice_data) - slice_known))}")
                kwargs["slices"] = SliceConfig(**slice_data)
            for key in ("test_centers", "e_p_slices"):
                if kwargs.get(key) is not None:
                    kwargs[key] = tuple(float(v) for v in kwargs[key])
            config = cls(**kwargs)
            config.validate()
        except (TypeError, ValueError) as e:
            if isinstance(e, ConfigError):
                raise
            raise ConfigError(f"配置字段类型错误: {e}") from e

        return config

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        for key in ("test_centers", "e_p_slices"):
            if data[key] is not None:
                data[key] = list(data[key])
        return data

    def with_seed(self, seed: Optional[int]) -> 'SessionConfig':
        if seed is None:
            return self
        data = self.to_dict()
        data["seed"] = seed
        return SessionConfig.from_dict(data)


def load_session_config(path: Union[str, Path]) -> SessionConfig:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        logger.error(f"读取配置失败 {path}: {e}")
        raise ConfigError(f"无法读取配置 {path}: {e}") from e
    logger.info(f"📄 已加载会话配置: {path.name}")
    return SessionConfig.from_dict(data)
