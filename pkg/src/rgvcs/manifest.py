"""Line-oriented ``key=value`` manifest binding shadow files to their scheme."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .image import ShadowSet
from .pbm import read_pbm, write_pbm
from .sharing import InvalidParameterError, SchemeParams

MANIFEST_VERSION = 1
MANIFEST_NAME = "manifest.txt"


@dataclass
class ShareManifest:
    params: SchemeParams
    seed: int
    height: int
    width: int
    shadows: list
    groups: list

    def __post_init__(self):
        if len(set(self.shadows)) != len(self.shadows):
            raise InvalidParameterError("shadow filenames must be unique")
        if len(self.shadows) != self.params.n:
            raise InvalidParameterError(
                f"manifest lists {len(self.shadows)} shadows for n={self.params.n}"
            )
        layout = self.params.layout
        expected = [layout.group_of(i) + 1 for i in range(self.params.n)]
        if list(self.groups) != expected:
            raise InvalidParameterError("group membership does not match the scheme layout")

    @classmethod
    def for_shadow_set(cls, shadow_set: ShadowSet) -> "ShareManifest":
        n = len(shadow_set)
        h, w = shadow_set.shape
        return cls(
            params=shadow_set.params,
            seed=shadow_set.seed,
            height=h,
            width=w,
            shadows=[f"sc_{i}.pbm" for i in range(1, n + 1)],
            groups=[shadow_set.group_of(i) for i in range(1, n + 1)],
        )

    def dumps(self) -> str:
        p = self.params
        fields = [
            ("version", MANIFEST_VERSION),
            ("scheme", p.variant.value),
            ("inner", p.inner.value),
            ("k", p.k),
            ("nprime", p.n_prime),
            ("n", p.n),
            ("seed", self.seed),
            ("height", self.height),
            ("width", self.width),
            ("shadows", ",".join(self.shadows)),
            ("groups", ",".join(str(g) for g in self.groups)),
        ]
        return "".join(f"{key}={value}\n" for key, value in fields)

    @classmethod
    def loads(cls, text: str) -> "ShareManifest":
        entries = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise InvalidParameterError(f"manifest line {lineno}: expected key=value")
            entries[key.strip()] = value.strip()
        missing = {"version", "scheme", "k", "nprime", "n", "seed", "height", "width", "shadows", "groups"} - entries.keys()
        if missing:
            raise InvalidParameterError(f"manifest missing fields: {', '.join(sorted(missing))}")
        try:
            if int(entries["version"]) != MANIFEST_VERSION:
                raise InvalidParameterError(f"unsupported manifest version {entries['version']}")
            params = SchemeParams(
                k=int(entries["k"]),
                n=int(entries["n"]),
                n_prime=int(entries["nprime"]),
                variant=entries["scheme"],
                inner=entries.get("inner", "yan"),
            )
            return cls(
                params=params,
                seed=int(entries["seed"]),
                height=int(entries["height"]),
                width=int(entries["width"]),
                shadows=entries["shadows"].split(","),
                groups=[int(g) for g in entries["groups"].split(",")],
            )
        except InvalidParameterError:
            raise
        except ValueError as exc:
            raise InvalidParameterError(f"manifest field is not a number: {exc}") from None


def save_shadow_set(shadow_set: ShadowSet, outdir, fmt: str = "auto") -> ShareManifest:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    manifest = ShareManifest.for_shadow_set(shadow_set)
    for name, shadow in zip(manifest.shadows, shadow_set.shadows):
        write_pbm(outdir / name, shadow, fmt)
    (outdir / MANIFEST_NAME).write_text(manifest.dumps(), encoding="utf-8")
    return manifest


def load_shadow_set(manifest_path) -> ShadowSet:
    manifest_path = Path(manifest_path)
    if manifest_path.is_dir():
        manifest_path = manifest_path / MANIFEST_NAME
    manifest = ShareManifest.loads(manifest_path.read_text(encoding="utf-8"))
    images = [read_pbm(manifest_path.parent / name) for name in manifest.shadows]
    for name, img in zip(manifest.shadows, images):
        if img.shape != (manifest.height, manifest.width):
            raise InvalidParameterError(f"{name} has shape {img.shape}, manifest says "
                                        f"{(manifest.height, manifest.width)}")
    return ShadowSet(params=manifest.params, seed=manifest.seed, shadows=np.stack(images))
