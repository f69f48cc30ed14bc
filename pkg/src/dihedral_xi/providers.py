"""
Sources of 3x3 linking blocks for M.

``table`` reads published values from a JSON file; ``computed`` runs the cover
engine on the scenes that hold each curve next to its push-off.
"""

import json
import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .cover import CoverComplex, build_cover_complex
from .diagram import Scene
from .errors import ProviderError
from .linking import BlockSource, LinkingBlock, linking_block

logger = logging.getLogger(__name__)

PUSHOFF_SUFFIX = "+"


class BlockDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    first: str
    second: str
    matrix: List[List[Union[int, str]]]


class BlockTableDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str = "table"
    blocks: List[BlockDocument] = Field(default_factory=list)


class TableBlockProvider(BlockSource):
    """Blocks injected from a table file; ``second`` names the push-off, e.g. ``A+``."""

    def __init__(self, blocks: Dict[Tuple[str, str], LinkingBlock], name: str = "table"):
        self.name = name
        self.blocks = blocks

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "TableBlockProvider":
        try:
            with open(path, "r", encoding="utf-8") as f:
                doc = BlockTableDocument.model_validate(json.load(f))
        except FileNotFoundError:
            raise ProviderError(f"block table not found: {path}") from None
        except (json.JSONDecodeError, ValidationError) as e:
            raise ProviderError(f"invalid block table {path}: {e}") from e

        blocks: Dict[Tuple[str, str], LinkingBlock] = {}
        for entry in doc.blocks:
            second = entry.second.removesuffix(PUSHOFF_SUFFIX)
            key = (entry.first, second)
            if key in blocks:
                raise ProviderError(f"duplicate block {entry.first},{entry.second}")
            try:
                blocks[key] = LinkingBlock.build(entry.first, second, entry.matrix)
            except ValueError as e:
                raise ProviderError(f"bad entry in block {entry.first},{entry.second}: {e}")
        logger.info(f"Loaded {len(blocks)} blocks from {path}")
        return cls(blocks, doc.name)

    def block(self, first: str, second: str) -> LinkingBlock:
        try:
            return self.blocks[(first, second)]
        except KeyError:
            raise ProviderError(
                f"table {self.name} has no block for {first} against {second}{PUSHOFF_SUFFIX}",
                first=first,
                second=second,
            ) from None


class ComputedBlockProvider(BlockSource):
    """Blocks computed from scenes.

    ``pushoffs`` maps a curve to the component that plays its positive
    push-off; block(x, y) needs a scene holding both x and pushoffs[y].
    """

    def __init__(
        self,
        scenes: Sequence[Scene],
        pushoffs: Dict[str, str],
        max_workers: int = 1,
    ):
        self.scenes = list(scenes)
        self.pushoffs = dict(pushoffs)
        self.max_workers = max_workers
        self._complexes: Dict[int, CoverComplex] = {}
        self._blocks: Dict[Tuple[str, str], LinkingBlock] = {}
        self._lock = threading.Lock()

    def _scene_for(self, first: str, second: str) -> Tuple[int, str]:
        if second not in self.pushoffs:
            raise ProviderError(f"no push-off component declared for {second}")
        pushoff = self.pushoffs[second]
        for index, scene in enumerate(self.scenes):
            names = {c.name for c in scene.components}
            if first in names and pushoff in names:
                return index, pushoff
        raise ProviderError(
            f"no scene contains both {first} and {pushoff}",
            first=first,
            second=second,
        )

    def complex_for(self, index: int) -> CoverComplex:
        """Cover of ``self.scenes[index]``; scene names need not be unique."""
        with self._lock:
            cached = self._complexes.get(index)
        if cached is not None:
            return cached
        built = build_cover_complex(self.scenes[index])
        with self._lock:
            return self._complexes.setdefault(index, built)

    def block(self, first: str, second: str) -> LinkingBlock:
        with self._lock:
            cached = self._blocks.get((first, second))
        if cached is not None:
            return cached
        index, pushoff = self._scene_for(first, second)
        computed = linking_block(self.complex_for(index), first, pushoff)
        block = LinkingBlock(first, second, computed.matrix)
        with self._lock:
            self._blocks[(first, second)] = block
        return block

    def prefetch(self, pairs: Iterable[Tuple[str, str]]) -> None:
        """Compute several blocks up front, in parallel when max_workers > 1."""
        wanted = sorted(set(pairs))
        if self.max_workers <= 1 or len(wanted) <= 1:
            for first, second in wanted:
                self.block(first, second)
            return
        with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
            list(pool.map(lambda pair: self.block(*pair), wanted))


def parse_provider_option(value: Optional[str]) -> Tuple[str, Optional[str]]:
    """``computed`` or ``table:<path>``."""
    if not value or value == "computed":
        return "computed", None
    kind, sep, path = value.partition(":")
    if kind != "table":
        raise ProviderError(f"unknown provider {value!r}; use 'computed' or 'table:<path>'")
    if not sep or not path:
        raise ProviderError("provider 'table' requires a table file: table:<path>")
    return "table", path
