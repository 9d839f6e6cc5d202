"""Object category whitelist and per-category affordance profiles.

The whitelist is the closed set of names the planner prompt advertises; programs
may only instantiate or reference these. Affordance flags drive the static
validator (is this method ever legal on this category) and the simulator's
interaction rules share the same table.
"""
from __future__ import annotations

from dataclasses import dataclass

# Order matters: prompts render the list in this exact order.
OBJECT_CATEGORIES: tuple[str, ...] = (
    "ShowerDoor", "Cabinet", "CounterTop", "Sink", "Towel", "HandTowel",
    "TowelHolder", "SoapBar", "ToiletPaper", "ToiletPaperHanger",
    "HandTowelHolder", "SoapBottle", "GarbageCan", "Candle", "ScrubBrush",
    "Plunger", "SinkBasin", "Cloth", "SprayBottle", "Toilet", "Faucet",
    "ShowerHead", "Box", "Bed", "Book", "DeskLamp", "BasketBall", "Pen",
    "Pillow", "Pencil", "CellPhone", "KeyChain", "Painting", "CreditCard",
    "AlarmClock", "CD", "Laptop", "Drawer", "SideTable", "Chair", "Blinds",
    "Desk", "Curtains", "Dresser", "Watch", "Television", "WateringCan",
    "Newspaper", "FloorLamp", "RemoteControl", "HousePlant", "Statue",
    "Ottoman", "ArmChair", "Sofa", "DogBed", "BaseballBat", "TennisRacket",
    "VacuumCleaner", "Mug", "ShelvingUnit", "Shelf", "StoveBurner", "Apple",
    "Lettuce", "Bottle", "Egg", "Microwave", "CoffeeMachine", "Fork", "Fridge",
    "WineBottle", "Spatula", "Bread", "Tomato", "Pan", "Cup", "Pot",
    "SaltShaker", "Potato", "PepperShaker", "ButterKnife", "StoveKnob",
    "Toaster", "DishSponge", "Spoon", "Plate", "Knife", "DiningTable", "Bowl",
    "LaundryHamper", "Vase", "Stool", "CoffeeTable", "Poster", "Bathtub",
    "TissueBox", "Footstool", "BathtubBasin", "ShowerCurtain", "TVStand",
    "Boots", "RoomDecor", "PaperTowelRoll", "Ladle", "Kettle", "Safe",
    "GarbageBag", "TeddyBear", "TableTopDecor", "Dumbbell", "Desktop",
    "AluminumFoil", "Window", "LightSwitch", "AppleSliced", "BreadSliced",
    "LettuceSliced", "PotatoSliced", "TomatoSliced",
)

CATEGORY_SET = frozenset(OBJECT_CATEGORIES)

# Slicing a parent category yields instances of its sliced product.
SLICED_PRODUCT: dict[str, str] = {
    "Apple": "AppleSliced",
    "Bread": "BreadSliced",
    "Lettuce": "LettuceSliced",
    "Potato": "PotatoSliced",
    "Tomato": "TomatoSliced",
}
SLICE_PARENT: dict[str, str] = {v: k for k, v in SLICED_PRODUCT.items()}

# Attributes a program may request on instantiation.
ALLOWED_ATTRIBUTES = frozenset({"toasted", "clean", "cooked"})

_PICKUPABLE = {
    "Towel", "HandTowel", "SoapBar", "ToiletPaper", "SoapBottle", "Candle",
    "ScrubBrush", "Plunger", "Cloth", "SprayBottle", "Box", "Book",
    "BasketBall", "Pen", "Pillow", "Pencil", "CellPhone", "KeyChain",
    "CreditCard", "AlarmClock", "CD", "Laptop", "Watch", "WateringCan",
    "Newspaper", "RemoteControl", "Statue", "BaseballBat", "TennisRacket",
    "Mug", "Apple", "Lettuce", "Bottle", "Egg", "Fork", "WineBottle",
    "Spatula", "Bread", "Tomato", "Pan", "Cup", "Pot", "SaltShaker", "Potato",
    "PepperShaker", "ButterKnife", "DishSponge", "Spoon", "Plate", "Knife",
    "Bowl", "Vase", "TissueBox", "Boots", "PaperTowelRoll", "Ladle", "Kettle",
    "GarbageBag", "TeddyBear", "TableTopDecor", "Dumbbell", "AluminumFoil",
    "AppleSliced", "BreadSliced", "LettuceSliced", "PotatoSliced",
    "TomatoSliced",
}

_RECEPTACLE = {
    "Cabinet", "CounterTop", "Sink", "SinkBasin", "GarbageCan", "Box", "Bed",
    "Drawer", "SideTable", "Chair", "Desk", "Dresser", "Ottoman", "ArmChair",
    "Sofa", "DogBed", "Mug", "ShelvingUnit", "Shelf", "StoveBurner",
    "Microwave", "CoffeeMachine", "Fridge", "Pan", "Cup", "Pot", "Toaster",
    "Plate", "DiningTable", "Bowl", "LaundryHamper", "Stool", "CoffeeTable",
    "Bathtub", "BathtubBasin", "TVStand", "Footstool", "Safe", "Toilet",
    "ToiletPaperHanger", "TowelHolder", "HandTowelHolder",
}

_OPENABLE = {
    "Fridge", "Cabinet", "Drawer", "Microwave", "Box", "Safe", "Toilet",
    "ShowerDoor", "ShowerCurtain", "Blinds", "Book", "Laptop", "Kettle",
}

_TOGGLEABLE = {
    "DeskLamp", "FloorLamp", "StoveBurner", "StoveKnob", "Microwave",
    "CoffeeMachine", "Toaster", "Television", "Laptop", "CellPhone", "Faucet",
    "ShowerHead", "LightSwitch", "Candle", "VacuumCleaner", "Desktop",
}

_SLICEABLE = set(SLICED_PRODUCT)

_COOKABLE = {"Potato", "PotatoSliced", "Egg"}

_TOASTABLE = {"BreadSliced"}

_CLEANABLE = {
    "Mug", "Cup", "Bowl", "Plate", "Pot", "Pan", "Fork", "Spoon", "Knife",
    "ButterKnife", "Spatula", "Ladle", "Kettle", "Cloth", "DishSponge",
    "Towel", "HandTowel", "Apple", "Tomato", "Lettuce", "Potato",
    "AppleSliced", "TomatoSliced", "LettuceSliced", "PotatoSliced",
}

_FILLABLE = {
    "Mug", "Cup", "Bowl", "Pot", "Kettle", "Bottle", "WineBottle",
    "WateringCan", "HousePlant", "Sink", "SinkBasin", "Bathtub",
    "BathtubBasin",
}

# Pouring into one of these discards the liquid instead of transferring it.
POUR_DISCARD = frozenset({
    "Sink", "SinkBasin", "Toilet", "GarbageCan", "Bathtub", "BathtubBasin",
})


@dataclass(frozen=True)
class AffordanceProfile:
    category: str
    pickupable: bool
    receptacle: bool
    openable: bool
    toggleable: bool
    sliceable: bool
    cookable: bool
    toastable: bool
    cleanable: bool
    fillable: bool


AFFORDANCES: dict[str, AffordanceProfile] = {
    name: AffordanceProfile(
        category=name,
        pickupable=name in _PICKUPABLE,
        receptacle=name in _RECEPTACLE,
        openable=name in _OPENABLE,
        toggleable=name in _TOGGLEABLE,
        sliceable=name in _SLICEABLE,
        cookable=name in _COOKABLE,
        toastable=name in _TOASTABLE,
        cleanable=name in _CLEANABLE,
        fillable=name in _FILLABLE,
    )
    for name in OBJECT_CATEGORIES
}


def affordance(category: str) -> AffordanceProfile:
    """Profile for a whitelisted category. Raises KeyError on unknown names."""
    return AFFORDANCES[category]


def is_known_category(name: str) -> bool:
    return name in CATEGORY_SET
