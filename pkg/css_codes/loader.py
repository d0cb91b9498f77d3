"""
纯文本比特矩阵文件：每行一行矩阵，'0101' 或 '0 1 0 1' 均可，'#' 开头为注释
"""
import logging
from pathlib import Path
from typing import Union

import numpy as np

from .matrices import ParityCheckMatrix, NestedCodePair, CodeError, verify_nested

logger = logging.getLogger(__name__)


def parse_bit_matrix(text: str) -> ParityCheckMatrix:
    rows = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        compact = line.replace(" ", "").replace(",", "")
        if set(compact) - {"0", "1"}:
            raise CodeError(f"第 {number} 行含非法字符: {raw!r}")
        rows.append([int(ch) for ch in compact])

    if not rows:
        raise CodeError("矩阵文件为空")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise CodeError(f"各行长度不一致: {sorted(widths)}")
    return ParityCheckMatrix(np.array(rows, dtype=np.uint8))


def load_bit_matrix(path: Union[str, Path]) -> ParityCheckMatrix:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        logger.error(f"读取矩阵文件失败 {path}: {e}")
        raise CodeError(f"无法读取 {path}: {e}") from e
    H = parse_bit_matrix(text)
    logger.info(f"📄 已加载校验矩阵 {path.name}: {H.rows}x{H.cols}, rank={H.rank}")
    return H


def load_nested_pair(h1_path: Union[str, Path], h2_path: Union[str, Path],
                     name: str = "file") -> NestedCodePair:
    pair = NestedCodePair(H1=load_bit_matrix(h1_path), H2=load_bit_matrix(h2_path), name=name)
    if not verify_nested(pair):
        raise CodeError(f"{h1_path} / {h2_path} 不满足 C2 ⊂ C1")
    return pair
