"""Intent dispatch: role legality table and the single entry point.

The server funnels every client action through ``apply_intent``; an illegal
or failed intent raises and leaves the world untouched.
"""

from __future__ import annotations

from ..errors import PreconditionError, RoleViolationError
from ..signals import Signal
from . import actions
from .entities import FETCHER, INSTALLER
from .state import WorldState

_BOTH = frozenset({INSTALLER, FETCHER})
_INSTALLER_ONLY = frozenset({INSTALLER})
_FETCHER_ONLY = frozenset({FETCHER})

# kind -> (legal roles, handler)
INTENT_TABLE = {
    "move": (_BOTH, actions.do_move),
    "chat": (_BOTH, actions.do_chat),
    "menu": (_BOTH, actions.do_menu),
    "grab": (_INSTALLER_ONLY, actions.do_grab),
    "release": (_INSTALLER_ONLY, actions.do_release),
    "move_held": (_INSTALLER_ONLY, actions.do_move_held),
    "joystick": (_INSTALLER_ONLY, actions.do_joystick),
    "apply_glue": (_INSTALLER_ONLY, actions.do_apply_glue),
    "place_clamp": (_INSTALLER_ONLY, actions.do_place_clamp),
    "connect": (_INSTALLER_ONLY, actions.do_connect),
    "lift": (_INSTALLER_ONLY, actions.do_lift_control),
    "enter_lift": (_INSTALLER_ONLY, actions.do_enter_lift),
    "exit_lift": (_INSTALLER_ONLY, actions.do_exit_lift),
    "order_pipes": (_FETCHER_ONLY, actions.do_order_pipes),
    "robot_dog": (_FETCHER_ONLY, actions.do_robot_dog),
    "refill": (_FETCHER_ONLY, actions.do_refill),
}

INTENT_KINDS = tuple(sorted(INTENT_TABLE))


def roles_for(kind: str) -> frozenset[str]:
    return INTENT_TABLE[kind][0]


def apply_intent(world: WorldState, role: str, intent: dict) -> list[Signal]:
    """Apply one intent for ``role``; raises on rejection, returns signals.

    Handlers validate before mutating, so any raise means no state change.
    """
    kind = intent.get("kind")
    if kind not in INTENT_TABLE:
        raise PreconditionError(f"unknown intent kind {kind!r}")
    legal_roles, handler = INTENT_TABLE[kind]
    if role not in legal_roles:
        raise RoleViolationError(f"intent {kind!r} is not available to the {role}")
    return handler(world, world.participant(role), intent)
