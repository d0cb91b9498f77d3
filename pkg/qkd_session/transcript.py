"""
公开信道记录：按顺序保存所有公开消息，并统计泄露比特数
泄露 = 伴随式比特 + 公开数值个数（与密钥无关的调度信息不计）
"""
import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, TextIO

import numpy as np

logger = logging.getLogger(__name__)

# kind -> 是否计入泄露
MESSAGE_KINDS = {
    "permutation": False,
    "roles": False,
    "check_disclosure": True,
    "probe_centers": False,
    "remainders": True,
    "verification": True,
    "syndrome": True,
    "slice_disclosure": True,
    "gate_verdict": False,
}

SYNDROME_KINDS = ("syndrome",)


def to_jsonable(value: Any) -> Any:
    """numpy 类型转成 JSON 可序列化的 Python 类型"""
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, dict):
        return {k: to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return value


@dataclass
class Message:
    seq: int
    kind: str
    payload: Dict[str, Any]
    leak: int

    def to_dict(self) -> Dict[str, Any]:
        return {"seq": self.seq, "kind": self.kind, "leak": self.leak, "payload": to_jsonable(self.payload)}


@dataclass
class Transcript:
    messages: List[Message] = field(default_factory=list)

    def publish(self, kind: str, payload: Dict[str, Any], values: Sequence = ()) -> Message:
        """
        追加一条公开消息
        values: 计入泄露的那部分载荷（比特或数值），按个数计
        """
        if kind not in MESSAGE_KINDS:
            raise ValueError(f"未知消息类型: {kind}")
        leak = int(np.size(values)) if MESSAGE_KINDS[kind] else 0
        message = Message(seq=len(self.messages), kind=kind, payload=payload, leak=leak)
        self.messages.append(message)
        logger.debug(f"📨 公开消息 #{message.seq} {kind}, 泄露 {leak}")
        return message

    @property
    def leaked_bits(self) -> int:
        return sum(m.leak for m in self.messages)

    def syndrome_bits(self) -> int:
        return sum(m.leak for m in self.messages if m.kind in SYNDROME_KINDS)

    def disclosed_values(self) -> int:
        return sum(m.leak for m in self.messages if m.kind not in SYNDROME_KINDS)

    def kinds(self) -> List[str]:
        return [m.kind for m in self.messages]

    def numbers(self) -> np.ndarray:
        """载荷里出现的所有浮点数（用于扫描是否泄露了密钥 x 值）"""
        found: List[float] = []

        def walk(value):
            if isinstance(value, np.ndarray):
                if value.dtype.kind == "f":
                    found.extend(value.ravel().tolist())
            elif isinstance(value, (float, np.floating)):
                found.append(float(value))
            elif isinstance(value, dict):
                for v in value.values():
                    walk(v)
            elif isinstance(value, (list, tuple)):
                for v in value:
                    walk(v)

        for m in self.messages:
            walk(m.payload)
        return np.array(found, dtype=float)

    def contains_any(self, secret_values: np.ndarray) -> bool:
        """是否有任何载荷数值与给定的私密数值逐位相等"""
        numbers = self.numbers()
        if numbers.size == 0 or np.size(secret_values) == 0:
            return False
        return bool(np.isin(numbers, np.asarray(secret_values, dtype=float)).any())

    def dump_ndjson(self, stream: TextIO):
        for m in self.messages:
            stream.write(json.dumps(m.to_dict(), ensure_ascii=False) + "\n")
