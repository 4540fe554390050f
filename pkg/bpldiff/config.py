"""
Campaign configuration: the dataclass the campaign runs from and a loader for
the flat `key = value` configuration file.

Example file::

    # desk campaign
    output_dir = runs/desk
    batches = typed:5:1000, typed:7:1000:42
    step_budget = 100000
    boogie = /opt/boogie/BoogieDriver
    boogie_timeout = 60
"""
from dataclasses import dataclass, field
from pathlib import Path
from textwrap import dedent
from typing import Callable, Optional, TypeVar

import psutil

from bpldiff.boogie import BoogieConfig
from bpldiff.executor import ExecConfig
from bpldiff.generator import BatchSpec, GenConfig, GenKind
from bpldiff.syntax.boogie import EmitStyle
from bpldiff.utils import derive_seed, quote_and_join

T = TypeVar('T')


class CampaignConfigError(Exception):
    def __init__(self, message: str):
        self.detail = message
        text = dedent(f"""
            I'm trying to read the campaign configuration, but something is wrong.
            {message}
        """)
        super().__init__(text)


def default_workers() -> tuple[int, int, int]:
    """Generation, execution and verification workers for this host, in a 1:2:8 split."""
    cores = psutil.cpu_count() or 1
    return max(1, cores // 4), max(1, cores // 2), max(1, cores * 2)


@dataclass(frozen=True)
class CampaignConfig:
    output_dir: Path
    batches: tuple[BatchSpec, ...]
    exec_config: ExecConfig = field(default_factory=ExecConfig)
    boogie: Optional[BoogieConfig] = None
    gen_workers: int = 1
    exec_workers: int = 1
    verify_workers: int = 1
    resume: bool = False
    classify_incompleteness: bool = True
    emit_style: EmitStyle = EmitStyle.DECL_WITH_INIT
    saturation_factor: int = 100
    review_sample_size: int = 20
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.batches:
            raise CampaignConfigError('There are no batches to run.')
        ids = [b.id for b in self.batches]
        repeated = sorted({i for i in ids if ids.count(i) > 1})
        if repeated:
            raise CampaignConfigError(f'Batch ids must be unique, but {quote_and_join(repeated)} repeat.')
        for name in ('gen_workers', 'exec_workers', 'verify_workers', 'saturation_factor'):
            if getattr(self, name) < 1:
                raise CampaignConfigError(f"'{name}' must be at least 1.")
        if self.boogie is not None and self.boogie.style is not self.emit_style:
            raise CampaignConfigError(
                f"Programs are written in the '{self.emit_style.value}' style but verified in the "
                f"'{self.boogie.style.value}' style; the two must match."
            )

    @property
    def verify(self) -> bool:
        return self.boogie is not None


# File loading -----------------------------------------------------------------

KNOWN_KEYS = frozenset({
    'output_dir', 'batches', 'seed', 'step_budget', 'loop_detection',
    'detection_memory_cap', 'allow_div', 'emit_style', 'boogie', 'verify',
    'boogie_timeout', 'boogie_flags', 'boogie_version', 'classify_incompleteness',
    'gen_workers', 'exec_workers', 'verify_workers', 'resume', 'saturation_factor',
    'review_sample_size',
})
_TRUE = {'true', 'yes', 'on', '1'}
_FALSE = {'false', 'no', 'off', '0'}


def parse_bool(key: str, value: str) -> bool:
    lowered = value.strip().lower()
    if lowered in _TRUE:
        return True
    if lowered in _FALSE:
        return False
    raise CampaignConfigError(f"'{key}' must be true or false, but it is '{value}'.")

def _convert(key: str, value: str, convert: Callable[[str], T]) -> T:
    try:
        return convert(value)
    except ValueError:
        raise CampaignConfigError(f"'{key}' has an invalid value '{value}'.")

def parse_pairs(text: str) -> dict[str, str]:
    """
    Reads `key = value` lines, ignoring blank lines and `#` comments.

    Parameters
    ----------
    text : str
        The file content.

    Returns
    -------
    dict[str, str]
        The raw values by key.

    Raises
    ------
    CampaignConfigError
        On a line without `=`, a repeated key or an unknown key.
    """
    pairs: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise CampaignConfigError(f"Line {lineno} isn't of the form 'key = value': {raw!r}")
        key, value = (part.strip() for part in line.split('=', 1))
        if key not in KNOWN_KEYS:
            raise CampaignConfigError(f"Line {lineno} has an unknown key '{key}'.")
        if key in pairs:
            raise CampaignConfigError(f"The key '{key}' is set twice.")
        pairs[key] = value
    return pairs

def parse_batches(value: str, seed: int, allow_div: bool = True) -> tuple[BatchSpec, ...]:
    """
    Parses a comma-separated list of `kind:depth:count[:seed]` batch entries.

    Repeated kind and depth pairs get a `-<i>` suffix on their batch id.

    Parameters
    ----------
    value : str
        The `batches` value.
    seed : int
        The campaign seed; batches without an explicit seed derive one from it.
    allow_div : bool, optional
        Whether generated programs may divide.

    Returns
    -------
    tuple[BatchSpec, ...]
        The batches in file order.
    """
    specs: list[BatchSpec] = []
    seen: dict[str, int] = {}
    for position, entry in enumerate(e.strip() for e in value.split(',') if e.strip()):
        parts = entry.split(':')
        if len(parts) not in (3, 4):
            raise CampaignConfigError(f"The batch '{entry}' must be kind:depth:count[:seed].")
        kind_name, depth, count = parts[:3]
        try:
            kind = GenKind(kind_name.strip().lower())
        except ValueError:
            raise CampaignConfigError(
                f"The batch '{entry}' has kind '{kind_name}', but kinds are 'formed', 'named' and 'typed'."
            )
        try:
            max_depth, n = int(depth), int(count)
            batch_seed = int(parts[3]) if len(parts) == 4 else derive_seed(seed, kind.value, max_depth, position)
            gen = GenConfig(kind, max_depth, seed=batch_seed, allow_div=allow_div)
            base = f'{kind.value}-{max_depth}'
            seen[base] = seen.get(base, 0) + 1
            batch_id = base if seen[base] == 1 else f'{base}-{seen[base]}'
            specs.append(BatchSpec(n, gen, batch_id))
        except ValueError as error:
            raise CampaignConfigError(f"The batch '{entry}' is invalid: {error}")
    return tuple(specs)

def parse_config(text: str, base_dir: str | Path = '.') -> CampaignConfig:
    """
    Builds a campaign configuration from the text of a configuration file.

    Parameters
    ----------
    text : str
        The file content.
    base_dir : str | Path, optional
        Directory relative output paths are resolved against.

    Returns
    -------
    CampaignConfig
        The validated configuration.

    Raises
    ------
    CampaignConfigError
        If a key is unknown, missing or invalid.
    """
    pairs = parse_pairs(text)
    for required in ('output_dir', 'batches'):
        if required not in pairs:
            raise CampaignConfigError(f"The key '{required}' is required.")

    def get(key: str, convert: Callable[[str], T], default: T) -> T:
        return _convert(key, pairs[key], convert) if key in pairs else default

    def get_bool(key: str, default: bool) -> bool:
        return parse_bool(key, pairs[key]) if key in pairs else default

    seed = get('seed', int, 0)
    try:
        exec_config = ExecConfig(
            step_budget=get('step_budget', int, 100000),
            loop_detection=get_bool('loop_detection', True),
            detection_memory_cap=get('detection_memory_cap', int, 1000000),
        )
    except ValueError as error:
        raise CampaignConfigError(str(error))

    style_name = pairs.get('emit_style', EmitStyle.DECL_WITH_INIT.value)
    try:
        style = EmitStyle(style_name)
    except ValueError:
        raise CampaignConfigError(
            f"'emit_style' must be {quote_and_join([s.value for s in EmitStyle], ' or ')}, but it is '{style_name}'."
        )

    boogie: Optional[BoogieConfig] = None
    if get_bool('verify', 'boogie' in pairs):
        try:
            boogie = BoogieConfig(
                binary=pairs.get('boogie') or None,
                timeout=get('boogie_timeout', float, 60.0),
                flags=tuple(pairs.get('boogie_flags', '').split()),
                version=pairs.get('boogie_version', '3'),
                style=style,
            )
        except ValueError as error:
            raise CampaignConfigError(str(error))

    gen_w, exec_w, verify_w = default_workers()
    output_dir = Path(pairs['output_dir'])
    if not output_dir.is_absolute():
        output_dir = Path(base_dir) / output_dir
    return CampaignConfig(
        output_dir=output_dir,
        batches=parse_batches(pairs['batches'], seed, get_bool('allow_div', True)),
        exec_config=exec_config,
        boogie=boogie,
        gen_workers=get('gen_workers', int, gen_w),
        exec_workers=get('exec_workers', int, exec_w),
        verify_workers=get('verify_workers', int, verify_w),
        resume=get_bool('resume', False),
        classify_incompleteness=get_bool('classify_incompleteness', True),
        emit_style=style,
        saturation_factor=get('saturation_factor', int, 100),
        review_sample_size=get('review_sample_size', int, 20),
        seed=seed,
    )

def load_config(path: str | Path) -> CampaignConfig:
    """Loads a campaign configuration file; relative paths resolve against its directory."""
    config_path = Path(path)
    if not config_path.is_file():
        raise CampaignConfigError(f"There isn't a configuration file at '{config_path}'.")
    return parse_config(config_path.read_text(encoding='utf-8'), config_path.parent)
