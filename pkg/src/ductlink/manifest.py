"""Run manifests: enough provenance to reproduce a command bit-exactly.

A manifest records the subcommand, tool version, resolved SI parameters,
RNG seeds and algorithm identifiers, and SHA-256 digests of every input
file. It is written as flat ``key = value`` text next to the output file
with the suffix ``.manifest``.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path

__all__ = ["RunManifest", "file_digest", "write_manifest"]


def file_digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


@dataclass
class RunManifest:
    subcommand: str
    version: str
    parameters: dict[str, float] = field(default_factory=dict)
    seeds: dict[str, int] = field(default_factory=dict)
    input_digests: dict[str, str] = field(default_factory=dict)
    extras: dict[str, str] = field(default_factory=dict)

    def add_input(self, path: str | Path) -> None:
        self.input_digests[str(path)] = file_digest(path)

    def lines(self) -> list[str]:
        out = [f"subcommand = {self.subcommand}", f"version = {self.version}"]
        out += [f"parameters.{k} = {v!r}" for k, v in self.parameters.items()]
        out += [f"seeds.{k} = {v}" for k, v in self.seeds.items()]
        out += [f"input_sha256.{k} = {v}" for k, v in self.input_digests.items()]
        out += [f"{k} = {v}" for k, v in sorted(self.extras.items())]
        return out


def write_manifest(manifest: RunManifest, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(manifest.lines()) + "\n")
