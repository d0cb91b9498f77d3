"""
已发表的两切片净密钥率表（常数 + 出处说明）

出处：同调 Gaussian 调制、方差为 31 倍真空噪声、两切片编码、分束器损耗；
每行给出 e_b / e_p / R（切片 1 与切片 2）。e_p 列不在本仓库推导，只作为输入使用。
切片 1 在 1.0 dB 与 1.4 dB 处为 "-"（速率为负，不贡献密钥）。
"""
from dataclasses import dataclass
from typing import Optional, Tuple, List

from core_math.conventions import VACUUM_VARIANCE

# 调制方差：31 倍真空噪声
MODULATION_SNR = 31.0
MODULATION_VARIANCE = MODULATION_SNR * VACUUM_VARIANCE

# "31 倍真空噪声" 的两种读法：
#   signal - 信号方差 V_A 本身是 31 倍真空，V_A = 15.5
#   total  - 含真空噪声的总方差 V_A + 1/2 是 31 倍真空，V_A = 15.0
MODULATION_CONVENTIONS = {
    "signal": MODULATION_SNR * VACUUM_VARIANCE,
    "total": (MODULATION_SNR - 1.0) * VACUUM_VARIANCE,
}

# 切片表默认配置：按已发表 e_b 列评分达到严格档位的组合
TABLE_CONVENTION = "total"
TABLE_LABELING = "binary"
TABLE_DECODE = "map-sbar"
TABLE_MODULATION_VARIANCE = MODULATION_CONVENTIONS[TABLE_CONVENTION]

# 0 dB 总速率 "0.752 + 0.938 = 1.69"
PUBLISHED_TOTAL_ZERO_LOSS = 1.69

# 0 dB 切片 1 的 e_p 印作 5.33%，代入速率公式得 0.500 而非 0.752；
# 0.533% 恰好复现 0.752，推断为排印错误。两个值都保留，使用修正值时需显式标注。
PRINTED_EP1_ZERO_LOSS = 0.0533
CORRECTED_EP1_ZERO_LOSS = 0.00533

ANOMALY_NOTE = "e_p1 printed 5.33% gives R1=0.500; corrected 0.533% reproduces 0.752"


@dataclass(frozen=True)
class PublishedRow:
    loss_db: float
    e_b: Tuple[Optional[float], Optional[float]]
    e_p: Tuple[Optional[float], Optional[float]]
    rates: Tuple[Optional[float], Optional[float]]


PUBLISHED_ROWS: Tuple[PublishedRow, ...] = (
    PublishedRow(0.0, (0.0311, 0.0000401), (PRINTED_EP1_ZERO_LOSS, 0.00710), (0.752, 0.938)),
    PublishedRow(0.4, (0.0377, 0.0000782), (0.137, 0.286), (0.193, 0.135)),
    PublishedRow(0.7, (0.0432, 0.000125), (0.200, 0.375), (0.0204, 0.0434)),
    PublishedRow(1.0, (None, 0.000194), (None, 0.423), (None, 0.0147)),
    PublishedRow(1.4, (None, 0.000335), (None, 0.456), (None, 0.00114)),
)


def published_row(loss_db: float) -> Optional[PublishedRow]:
    for row in PUBLISHED_ROWS:
        if abs(row.loss_db - loss_db) < 1e-9:
            return row
    return None


def published_phase_errors(loss_db: float, corrected: bool = True) -> List[Optional[float]]:
    """某损耗下的 e_p 列；corrected=True 时 0 dB 切片 1 用修正值"""
    row = published_row(loss_db)
    if row is None:
        raise KeyError(f"没有 {loss_db} dB 的已发表 e_p")
    values = list(row.e_p)
    if corrected and row.loss_db == 0.0:
        values[0] = CORRECTED_EP1_ZERO_LOSS
    return values


def provenance() -> str:
    """--version 打印的常数出处"""
    lines = [
        "embedded constants: two-slice net key rate table, modulation 31x vacuum noise,",
        f"  losses {', '.join(f'{r.loss_db:.1f}' for r in PUBLISHED_ROWS)} dB; e_p columns are inputs, not derived;",
        f"  zero-loss slice-1 e_p: printed {PRINTED_EP1_ZERO_LOSS}, corrected {CORRECTED_EP1_ZERO_LOSS} (flagged)",
    ]
    return "\n".join(lines)
