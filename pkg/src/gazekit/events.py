"""Game-event timeline assembly and greedy target-click matching.

Appear/disappear events are joined into object episodes, preferring the
shared object id and falling back to type + order (first open appear of
the same type) when ids are absent. Matching is purely temporal: each
target, in chronological order, is offered the earliest still-unused
correct click strictly after its appear time. Under the default
``single-candidate`` strategy that one click is examined once — if its
reaction time falls outside [rt_min, rt_max] the target stays unmatched
and the click stays available. ``scan-forward`` keeps trying later unused
clicks until one lands in the window.
"""
from __future__ import annotations

from collections import deque
from typing import Deque, Optional, Sequence

from .config import MATCH_STRATEGIES
from .types import (
    EventKind,
    GameEvent,
    MatchedResponse,
    ObjectEpisode,
    ObjectType,
    Timeline,
)

_EVENT_SORT_ORDER = {EventKind.APPEAR: 0, EventKind.DISAPPEAR: 1, EventKind.CLICK: 2}


def _event_key(event: GameEvent) -> tuple[int, int, int]:
    return (event.timestamp_ms, _EVENT_SORT_ORDER[event.kind], event.line_number)


def build_timeline(events: Sequence[GameEvent]) -> Timeline:
    """Join appear/disappear pairs into episodes and collect clicks.

    A disappear with no open appear (by id, or by type when it has no id)
    is dropped and counted in the warnings. An appear with no disappear
    yields an open-ended episode.
    """
    ordered = sorted(events, key=_event_key)
    episodes: list[ObjectEpisode] = []
    warnings: list[str] = []
    clicks: list[GameEvent] = []
    open_by_id: dict[str, ObjectEpisode] = {}
    open_by_type: dict[ObjectType, Deque[ObjectEpisode]] = {}

    for event in ordered:
        if event.kind is EventKind.CLICK:
            clicks.append(event)
        elif event.kind is EventKind.APPEAR:
            episode = ObjectEpisode(
                object_id=event.object_id,
                object_type=event.object_type,
                appear_ms=event.timestamp_ms,
                position_px=event.position_px,
            )
            episodes.append(episode)
            if event.object_id is not None:
                open_by_id[event.object_id] = episode
            else:
                open_by_type.setdefault(event.object_type, deque()).append(episode)
        else:
            episode = _pop_open(event, open_by_id, open_by_type)
            if episode is None:
                warnings.append(
                    f"disappear at {event.timestamp_ms} ms "
                    f"(id={event.object_id!r}, type={event.object_type.value}) "
                    "has no matching appear; dropped"
                )
            else:
                episode.disappear_ms = event.timestamp_ms
    return Timeline(episodes=episodes, clicks=clicks, warnings=warnings)


def _pop_open(
    event: GameEvent,
    open_by_id: dict[str, ObjectEpisode],
    open_by_type: dict[ObjectType, Deque[ObjectEpisode]],
) -> Optional[ObjectEpisode]:
    if event.object_id is not None:
        return open_by_id.pop(event.object_id, None)
    queue = open_by_type.get(event.object_type)
    if queue:
        return queue.popleft()
    return None


def match_responses(
    targets: Sequence[ObjectEpisode],
    clicks: Sequence[GameEvent],
    rt_min: int,
    rt_max: int,
    strategy: str = "single-candidate",
) -> list[MatchedResponse]:
    """Greedily pair targets with subsequent correct clicks by time alone.

    Inputs may arrive in any order; both lists are sorted internally. Each
    click is consumed by at most one target and every reported reaction
    time lies in [rt_min, rt_max].
    """
    if strategy not in MATCH_STRATEGIES:
        raise ValueError(
            f"unknown match strategy {strategy!r}; expected one of {MATCH_STRATEGIES}"
        )
    ordered_targets = sorted(targets, key=lambda t: t.appear_ms)
    ordered_clicks = sorted(clicks, key=_event_key)
    used = [False] * len(ordered_clicks)
    matches: list[MatchedResponse] = []
    for target in ordered_targets:
        for idx, click in enumerate(ordered_clicks):
            if used[idx] or click.timestamp_ms <= target.appear_ms:
                continue
            rt = click.timestamp_ms - target.appear_ms
            if rt_min <= rt <= rt_max:
                used[idx] = True
                matches.append(MatchedResponse(target, click, rt))
                break
            if strategy == "single-candidate" or rt > rt_max:
                # single-candidate: the earliest candidate missed the
                # window, so the target stays unmatched. scan-forward only
                # keeps going while the miss was on the early side; later
                # clicks can only be later still.
                break
    return matches
