"""Landmark suggestion for object search.

Asks the backend where a target category is most likely found, then sanitizes
the answer against the whitelist and pads with commonsense priors so the
search routine always has up to three usable landmark categories.
"""
from __future__ import annotations

from ..dsl import is_known_category
from .backends import BackendError, CompletionBackend
from .prompts import assemble_locator_prompt

MAX_LANDMARKS = 3

# Commonsense fallbacks per target category; DEFAULT covers everything else.
LANDMARK_PRIORS: dict[str, list[str]] = {
    "Knife": ["CounterTop", "Drawer", "Sink"],
    "ButterKnife": ["Drawer", "CounterTop", "Sink"],
    "Fork": ["Drawer", "CounterTop", "Sink"],
    "Spoon": ["Drawer", "CounterTop", "Sink"],
    "Mug": ["CounterTop", "CoffeeMachine", "Cabinet"],
    "Cup": ["Cabinet", "CounterTop", "Sink"],
    "Bowl": ["Cabinet", "CounterTop", "Sink"],
    "Plate": ["Cabinet", "CounterTop", "Sink"],
    "Pot": ["StoveBurner", "CounterTop", "Cabinet"],
    "Pan": ["StoveBurner", "CounterTop", "Cabinet"],
    "Kettle": ["StoveBurner", "CounterTop", "Cabinet"],
    "Apple": ["CounterTop", "Fridge", "Sink"],
    "Tomato": ["CounterTop", "Fridge", "Sink"],
    "Lettuce": ["CounterTop", "Fridge", "Sink"],
    "Potato": ["CounterTop", "Fridge", "Microwave"],
    "Egg": ["Fridge", "CounterTop", "Sink"],
    "Bread": ["CounterTop", "Cabinet", "Fridge"],
    "AppleSliced": ["CounterTop", "Plate", "Sink"],
    "TomatoSliced": ["CounterTop", "Plate", "Sink"],
    "LettuceSliced": ["CounterTop", "Plate", "Sink"],
    "PotatoSliced": ["CounterTop", "Plate", "Sink"],
    "BreadSliced": ["CounterTop", "Toaster", "Plate"],
    "ScrubBrush": ["Toilet", "Sink", "CounterTop"],
    "SoapBar": ["Sink", "Bathtub", "CounterTop"],
    "TissueBox": ["SideTable", "Desk", "Dresser"],
    "SaltShaker": ["CounterTop", "Cabinet", "DiningTable"],
    "PepperShaker": ["CounterTop", "Cabinet", "DiningTable"],
    "DishSponge": ["Sink", "CounterTop", "Cabinet"],
    "Cloth": ["Sink", "CounterTop", "Bathtub"],
}
DEFAULT_PRIORS = ["CounterTop", "DiningTable", "Shelf"]


def parse_locator_response(response: str, target_category: str) -> list[str]:
    """Whitelisted, deduplicated categories from a comma-separated answer."""
    text = response.strip()
    if text.lower().startswith("answer:"):
        text = text[len("answer:"):]
    found: list[str] = []
    for token in text.split(","):
        name = token.strip().strip('".')
        if not name:
            continue
        if is_known_category(name) and name != target_category:
            if name not in found:
                found.append(name)
        if len(found) >= MAX_LANDMARKS:
            break
    return found


def _pad_with_priors(found: list[str], target_category: str) -> list[str]:
    priors = LANDMARK_PRIORS.get(target_category, []) + DEFAULT_PRIORS
    for name in priors:
        if len(found) >= MAX_LANDMARKS:
            break
        if name != target_category and name not in found:
            found.append(name)
    return found[:MAX_LANDMARKS]


def locate_object_landmarks(
    target_category: str,
    dialogue_text: str,
    backend: CompletionBackend,
) -> list[str]:
    """Up to three landmark categories near which to search for the target.

    Never returns an empty list: junk or missing backend output falls back to
    the prior table.
    """
    prompt = assemble_locator_prompt(target_category, dialogue_text)
    try:
        response = backend.complete(prompt)
        found = parse_locator_response(response, target_category)
    except BackendError:
        found = []
    return _pad_with_priors(found, target_category)
