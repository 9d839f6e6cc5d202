"""Statement-by-statement program execution.

The executor walks an action program, binding handles to remembered object
instances on first use (searching for them when memory is empty), expanding
compound methods into primitive interaction sequences, and driving the agent
through navigation, aiming, and pixel-addressed interactions. Failed actions
are diagnosed, sent back to the planner for a corrective program, and retried
a bounded number of times; precondition violations are repaired inline.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ..dsl import AFFORDANCES
from ..dsl.program import (
    CORRECTIVE_METHODS,
    Call,
    Instantiate,
    Statement,
    render_program,
    render_statement,
)
from ..perception import ObjectInstance, project
from ..planner.backends import BackendError
from ..planner.dialogue import Dialogue
from ..planner.locator import locate_object_landmarks
from ..planner.planner import FailureFeedback, PlanError, Planner
from .agent import AgentSession, BudgetExhausted
from .exploration import explore
from .failures import FailureClassifier, classify_failure
from .navigation import (
    NavError,
    cells_near_point,
    distance_field,
    nearest_reachable,
    pitch_facing,
    plan_route,
    turns_between,
    yaw_facing,
    UNREACHABLE,
)
from .preconditions import (
    FAIL,
    REPAIR,
    SKIP,
    TargetEstimate,
    check_preconditions,
)

SIM_INTERACTIONS = {
    "pickup", "place", "open", "close", "toggle_on", "toggle_off",
    "slice", "pour",
}

MACRO_METHODS = {
    "clean", "cook", "toast", "fill_up", "empty", "pickup_and_place",
    "put_down",
}

_BASIN_CATEGORIES = ("SinkBasin", "Sink", "BathtubBasin")


class StatementFailure(Exception):
    def __init__(self, error_text: str, code: str | None = None):
        super().__init__(error_text)
        self.error_text = error_text
        self.code = code


class PreconditionFail(Exception):
    pass


@dataclass
class ExecutorConfig:
    precheck: bool = True
    correction: bool = True
    use_locator: bool = True
    max_correction_rounds: int = 2
    max_repair_depth: int = 2
    abort_on_failure: bool = False
    stop_margin: float = 0.1
    close_stop: float = 0.65
    landmark_radius: float = 2.0
    search_step_budget: int = 200
    max_replans: int = 12


@dataclass
class Binding:
    handle: str
    category: str
    landmark: str | None = None
    attributes: list[str] = field(default_factory=list)
    instance_id: int | None = None


@dataclass
class StatementRecord:
    index: int
    source: str
    outcome: str = "pending"
    error_text: str | None = None
    detail: str | None = None
    correction_rounds: int = 0
    repairs: list[str] = field(default_factory=list)
    steps_before: int = 0
    steps_after: int = 0

    def to_record(self) -> dict:
        return {
            "index": self.index,
            "source": self.source,
            "outcome": self.outcome,
            "error_text": self.error_text,
            "detail": self.detail,
            "correction_rounds": self.correction_rounds,
            "repairs": list(self.repairs),
            "steps": [self.steps_before, self.steps_after],
        }


@dataclass
class ExecutionTrace:
    records: list[StatementRecord] = field(default_factory=list)
    total_steps: int = 0
    api_failures: int = 0
    aborted: bool = False

    @property
    def failed_count(self) -> int:
        return sum(1 for r in self.records if r.outcome == "failed")

    def to_jsonl(self) -> str:
        return "\n".join(json.dumps(r.to_record(), sort_keys=True)
                         for r in self.records)


class Executor:
    def __init__(
        self,
        session: AgentSession,
        planner: Planner | None = None,
        config: ExecutorConfig | None = None,
        rng: np.random.Generator | None = None,
        failure_classifier: FailureClassifier | None = None,
    ):
        self.session = session
        self.planner = planner
        self.cfg = config or ExecutorConfig()
        self.rng = rng or np.random.default_rng(0)
        self.failure_classifier = failure_classifier
        self.bindings: dict[str, Binding] = {}
        self.est: dict[int, TargetEstimate] = {}
        self.held: ObjectInstance | None = None
        self.dialogue = Dialogue([])
        self._last_target: ObjectInstance | None = None

    # ----------------------------------------------------------- plumbing

    @property
    def backend(self):
        return self.planner.backend if self.planner is not None else None

    @property
    def held_category(self) -> str | None:
        return self.held.label if self.held is not None else None

    def _estimate(self, inst: ObjectInstance) -> TargetEstimate:
        return self.est.setdefault(inst.instance_id, TargetEstimate())

    def set_held(self, inst: ObjectInstance) -> None:
        """Seed the held-object estimate, e.g. after replaying a history."""
        self.held = inst
        inst.attributes["holding"] = True

    # ---------------------------------------------------------- main loop

    def execute_program(self, program: list[Statement],
                        dialogue: Dialogue) -> ExecutionTrace:
        self.dialogue = dialogue
        trace = ExecutionTrace()
        world = self.session.world
        for idx, stmt in enumerate(program):
            rec = StatementRecord(idx, render_statement(stmt),
                                  steps_before=world.steps_taken)
            trace.records.append(rec)
            self._emit_status(rec, "running")
            try:
                if isinstance(stmt, Instantiate):
                    self.bindings[stmt.handle] = Binding(
                        stmt.handle, stmt.category, stmt.landmark,
                        list(stmt.attributes))
                    rec.outcome = "ok"
                else:
                    self._run_with_correction(stmt, rec)
            except BudgetExhausted as exc:
                rec.outcome = "failed"
                rec.error_text = str(exc)
                rec.steps_after = world.steps_taken
                trace.aborted = True
                self._emit_status(rec, "failed")
                break
            rec.steps_after = world.steps_taken
            self._emit_status(rec, rec.outcome)
            if rec.outcome == "failed" and self.cfg.abort_on_failure:
                break
        trace.total_steps = world.steps_taken
        trace.api_failures = world.api_failures
        self.session.emit_snapshot()
        return trace

    def _emit_status(self, rec: StatementRecord, status: str) -> None:
        self.session.emit("action", {
            "statement": rec.index,
            "source": rec.source,
            "status": status,
            "error_text": rec.error_text,
            "correction_rounds": rec.correction_rounds,
        })

    def _run_with_correction(self, call: Call, rec: StatementRecord) -> None:
        rounds = 0
        while True:
            try:
                self._run_call(call, rec)
            except PreconditionFail as exc:
                # A refused statement is a program bug, not an action
                # failure; corrective nudges cannot help.
                rec.outcome = "failed"
                rec.error_text = str(exc)
                return
            except (StatementFailure, NavError) as exc:
                error_text = getattr(exc, "error_text", str(exc))
                self.session.emit("failure", {
                    "statement": rec.index,
                    "subgoal": rec.source,
                    "error_text": error_text,
                })
                can_correct = (self.cfg.correction
                               and self.planner is not None
                               and rounds < self.cfg.max_correction_rounds)
                if not can_correct:
                    rec.outcome = "failed"
                    rec.error_text = error_text
                    rec.correction_rounds = rounds
                    return
                rounds += 1
                feedback = FailureFeedback(failed_subgoal=rec.source,
                                           error_text=error_text)
                try:
                    result = self.planner.synthesize_correction(
                        self.dialogue, feedback)
                except (BackendError, PlanError) as perr:
                    rec.outcome = "failed"
                    rec.error_text = f"{error_text} (correction: {perr})"
                    rec.correction_rounds = rounds
                    return
                self.session.emit("correction", {
                    "statement": rec.index,
                    "round": rounds,
                    "reflection": result.reflection,
                    "program": render_program(result.program),
                })
                self._run_corrective_program(result.program)
                continue
            rec.correction_rounds = rounds
            if rounds:
                rec.outcome = "corrected"
            elif rec.repairs:
                rec.outcome = "repaired"
            else:
                rec.outcome = "ok"
            return

    # ----------------------------------------------------- call execution

    def _run_call(self, call: Call, rec: StatementRecord,
                  repair_depth: int = 0) -> None:
        if call.method in CORRECTIVE_METHODS:
            self._apply_corrective(call.method)
            return
        if self.cfg.precheck:
            decision = check_preconditions(
                call, self.held_category, self._held_filled(),
                self._target_estimate(call))
            if decision.kind == SKIP:
                rec.detail = decision.reason
                return
            if decision.kind == FAIL:
                raise PreconditionFail(decision.reason)
            if decision.kind == REPAIR:
                if repair_depth >= self.cfg.max_repair_depth:
                    raise PreconditionFail(
                        f"cannot repair (depth limit): {decision.reason}")
                rec.repairs.append(render_program(decision.repair))
                self._run_repair(decision.repair, rec, repair_depth + 1)

        if call.method == "go_to":
            self._navigate_to_instance(self._resolve(call.handle))
            return
        if call.method in MACRO_METHODS:
            self._expand(call)
            return
        if call.method not in SIM_INTERACTIONS:
            raise PreconditionFail(f"unsupported method '{call.method}'")
        inst = self._resolve(call.handle)
        arg = self._resolve(call.arg) if call.arg is not None else None
        self._do_primitive(call.method, inst, arg)

    def _run_repair(self, statements: list[Statement], rec: StatementRecord,
                    depth: int) -> None:
        for stmt in statements:
            if isinstance(stmt, Instantiate):
                self.bindings[stmt.handle] = Binding(
                    stmt.handle, stmt.category, stmt.landmark,
                    list(stmt.attributes))
            else:
                self._run_call(stmt, rec, repair_depth=depth)

    def _run_corrective_program(self, program: list[Statement]) -> None:
        scratch = StatementRecord(-1, "corrective")
        for stmt in program:
            try:
                if isinstance(stmt, Instantiate):
                    self.bindings[stmt.handle] = Binding(
                        stmt.handle, stmt.category, stmt.landmark,
                        list(stmt.attributes))
                else:
                    self._run_call(stmt, scratch)
            except (StatementFailure, PreconditionFail, NavError):
                # A corrective program is best effort; the retry of the
                # original statement decides the outcome.
                return

    def _target_estimate(self, call: Call) -> TargetEstimate | None:
        binding = self.bindings.get(call.handle) if call.handle else None
        if binding is None or binding.instance_id is None:
            return None
        return self.est.get(binding.instance_id)

    def _held_filled(self) -> bool:
        if self.held is None:
            return False
        return self._estimate(self.held).filled

    # ------------------------------------------------------------ binding

    def _instance_by_id(self, instance_id: int) -> ObjectInstance | None:
        for inst in self.session.memory.instances:
            if inst.instance_id == instance_id:
                return inst
        return None

    def _resolve(self, handle: str | None) -> ObjectInstance:
        if handle is None:
            raise PreconditionFail("statement has no target")
        binding = self.bindings.get(handle)
        if binding is None:
            raise PreconditionFail(f"unknown handle '{handle}'")
        if binding.instance_id is not None:
            inst = self._instance_by_id(binding.instance_id)
            if inst is not None:
                return inst
            binding.instance_id = None   # vanished (e.g. sliced); re-resolve
        inst = self._pick_instance(binding)
        if inst is None:
            found = self.search_for_object(binding.category)
            if found is None:
                raise StatementFailure(
                    f"could not find a {binding.category} anywhere")
            inst = self._pick_instance(binding) or found
        binding.instance_id = inst.instance_id
        return inst

    def _pick_instance(self, binding: Binding) -> ObjectInstance | None:
        memory = self.session.memory
        hits = memory.find(binding.category)
        if not hits:
            return None
        # Distinct handles should name distinct objects: "two slices" means
        # two slices. Prefer instances no other handle has claimed, unless
        # that would leave nothing to bind.
        taken = {b.instance_id for b in self.bindings.values()
                 if b is not binding and b.instance_id is not None}
        free = [h for h in hits if h.instance_id not in taken]
        if free:
            hits = free
        if binding.landmark:
            marks = memory.find(binding.landmark)
            if marks:
                anchor = marks[0].centroid
                near = [h for h in hits
                        if float(np.linalg.norm(h.centroid - anchor))
                        <= self.cfg.landmark_radius]
                if near:
                    hits = near
        if binding.attributes:
            def matched(inst: ObjectInstance) -> int:
                return sum(1 for a in binding.attributes
                           if inst.attributes.get(a) is True)
            hits = sorted(hits, key=lambda h: (-matched(h), h.instance_id))
        return hits[0]

    # ------------------------------------------------------------- search

    def search_for_object(self, category: str) -> ObjectInstance | None:
        memory = self.session.memory
        found = memory.find(category)
        if found:
            return found[0]
        landmarks: list[str] = []
        if self.cfg.use_locator and self.backend is not None:
            landmarks = locate_object_landmarks(
                category, self.dialogue.to_prompt(), self.backend)
        for landmark in landmarks:
            anchors = memory.find(landmark)
            if not anchors:
                continue
            try:
                self._navigate_to_instance(anchors[0])
            except (StatementFailure, NavError):
                continue
            self.session.look_around((30, 0))
            found = memory.find(category)
            if found:
                return found[0]
        explore(self.session, self.rng,
                step_budget=self.cfg.search_step_budget,
                stop_when=lambda: bool(memory.find(category)))
        found = memory.find(category)
        return found[0] if found else None

    # --------------------------------------------------------- navigation

    def _navigate_to_instance(self, inst: ObjectInstance,
                              stop: float | None = None) -> None:
        c = inst.centroid
        self._navigate_to_point(float(c[0]), float(c[2]), stop)
        self._face_point(float(c[0]), float(c[1]), float(c[2]))
        self._last_target = inst

    def _stop_radius(self, stop: float | None) -> float:
        if stop is not None:
            return stop
        return self.session.config.interact_dist - self.cfg.stop_margin

    def _navigate_to_point(self, x: float, z: float,
                           stop: float | None = None) -> None:
        session = self.session
        step = session.config.step_m
        radius = self._stop_radius(stop)
        for _ in range(self.cfg.max_replans):
            grid = session.nav_state(optimistic=True)
            start = session.nav_cell()
            goals = cells_near_point(grid, step, x, z, radius)
            if start in goals:
                return
            if not goals:
                fallback = nearest_reachable(grid, start, step, x, z)
                if fallback is None or fallback == start:
                    return
                goals = [fallback]
            try:
                route = plan_route(grid, start, goals, session.pose.yaw)
            except NavError as exc:
                raise StatementFailure(f"no route to the target: {exc}")
            bumped = False
            for kind in route.actions:
                obs = session.do(kind)
                if not obs.action_success:
                    if kind == "forward":
                        session.mark_blocked_ahead()
                    bumped = True
                    break
            if not bumped:
                return
        raise StatementFailure("navigation kept hitting obstacles")

    def _face_point(self, x: float, y: float, z: float) -> None:
        session = self.session
        pose = session.pose
        target_yaw = yaw_facing(pose.x, pose.z, x, z)
        for kind in turns_between(pose.yaw, target_yaw):
            session.do(kind)
        dist = float(np.hypot(x - pose.x, z - pose.z))
        session.pitch_to(pitch_facing(session.config.camera_height, y, dist))

    # --------------------------------------------------------- primitives

    def _mask_pixel(self, inst: ObjectInstance) -> tuple[int, int] | None:
        obs = self.session.last_obs
        if obs is None or obs.depth is None:
            obs = self.session.refresh()
        for det in obs.masks:
            if det.object_id != inst.sim_id:
                continue
            vs, us = np.nonzero(det.mask)
            if len(us) == 0:
                continue
            cu, cv = us.mean(), vs.mean()
            pick = int(np.argmin((us - cu) ** 2 + (vs - cv) ** 2))
            return int(us[pick]), int(vs[pick])
        return None

    def _mask_aim(self, inst: ObjectInstance) -> tuple[int, int] | None:
        pixel = self._mask_pixel(inst)
        if pixel is not None:
            return pixel
        for pitch in (30, 0, 60):
            self.session.pitch_to(pitch)
            pixel = self._mask_pixel(inst)
            if pixel is not None:
                return pixel
        return None

    def _blind_aim(self, inst: ObjectInstance) -> tuple[int, int]:
        # Aim at the remembered centroid and let the attempt speak for
        # itself; a miss feeds the correction loop.
        us, vs, zs = project(inst.centroid[None, :], self.session.intrinsics,
                             self.session.camera_pose())
        res = self.session.config.camera_res
        u = int(np.clip(us[0], 0, res - 1)) if np.isfinite(us[0]) else res // 2
        v = int(np.clip(vs[0], 0, res - 1)) if np.isfinite(vs[0]) else res // 2
        return u, v

    def _aim(self, inst: ObjectInstance) -> tuple[int, int]:
        pixel = self._mask_aim(inst)
        if pixel is None:
            # The standoff cell can leave an occluder between the camera
            # and the target; close the gap and look again before
            # clicking blind.
            self._navigate_to_instance(inst, stop=self.cfg.close_stop)
            pixel = self._mask_aim(inst)
        if pixel is None:
            # The remembered point may be stale (objects move when placed
            # or carried); a scan re-associates the mask and corrects the
            # estimate, then approach it properly.
            self.session.look_around((30, 0))
            self._navigate_to_instance(inst, stop=self.cfg.close_stop)
            pixel = self._mask_aim(inst)
        if pixel is None:
            pixel = self._blind_aim(inst)
        return pixel

    def _do_primitive(self, method: str, inst: ObjectInstance,
                      arg: ObjectInstance | None = None) -> None:
        target = arg if method in ("place", "pour") and arg is not None else inst
        self._navigate_to_instance(target)
        u, v = self._aim(target)
        obs = self.session.do(method, u, v)
        if not obs.action_success:
            error_text = classify_failure(obs, method, self.failure_classifier)
            raise StatementFailure(error_text, code=obs.error_code)
        self._after_success(method, inst, arg)

    def _after_success(self, method: str, inst: ObjectInstance,
                       arg: ObjectInstance | None) -> None:
        if method == "pickup":
            self.held = inst
            inst.attributes["holding"] = True
        elif method == "place":
            if self.held is not None:
                self.held.attributes["holding"] = False
                if arg is not None:
                    # The object now rests on the receptacle; without this
                    # the next approach walks back to where it was picked
                    # up. The refresh below snaps the estimate to the
                    # rendered position while the receptacle is in view.
                    self.held.centroid = arg.centroid.copy()
            self.held = None
            self.session.refresh()
        elif method == "open":
            self._estimate(inst).open = True
        elif method == "close":
            self._estimate(inst).open = False
        elif method == "toggle_on":
            self._estimate(inst).powered = True
        elif method == "toggle_off":
            self._estimate(inst).powered = False
        elif method == "pour":
            if self.held is not None:
                self._estimate(self.held).filled = False
        elif method == "slice":
            # The whole object is gone; slices get picked up by the next
            # frame's detections under their own categories.
            self.session.memory.drop(inst)
            self.session.refresh()

    # -------------------------------------------------------- corrective

    def _apply_corrective(self, name: str) -> None:
        session = self.session
        target = self._last_target
        if name == "do_nothing":
            return
        if name == "move_back":
            session.do("backward")
            return
        if target is None:
            return
        c = target.centroid
        if name == "move_closer":
            limit = session.config.interact_dist - self.cfg.stop_margin
            self._face_point(float(c[0]), float(c[1]), float(c[2]))
            for _ in range(6):
                dist = float(np.hypot(c[0] - session.pose.x,
                                      c[2] - session.pose.z))
                if dist <= limit:
                    break
                obs = session.do("forward")
                if not obs.action_success:
                    session.mark_blocked_ahead()
                    break
            self._face_point(float(c[0]), float(c[1]), float(c[2]))
            return
        if name == "move_alternate_viewpoint":
            step = session.config.step_m
            grid = session.nav_state(optimistic=True)
            start = session.nav_cell()
            radius = session.config.interact_dist - self.cfg.stop_margin
            ring = [cell for cell in
                    cells_near_point(grid, step, float(c[0]), float(c[2]),
                                     radius)
                    if cell != start]
            if not ring:
                return
            dist = distance_field(grid, [start])
            ring = [cell for cell in ring if dist[cell] != UNREACHABLE]
            if not ring:
                return
            # The farthest reachable ring cell gives the most different
            # viewpoint.
            goal = max(ring, key=lambda cell: (dist[cell], cell))
            try:
                route = plan_route(grid, start, [goal], session.pose.yaw)
            except NavError:
                return
            for kind in route.actions:
                obs = session.do(kind)
                if not obs.action_success:
                    if kind == "forward":
                        session.mark_blocked_ahead()
                    break
            self._face_point(float(c[0]), float(c[1]), float(c[2]))

    # ------------------------------------------------------------- macros

    def _expand(self, call: Call) -> None:
        inst = self._resolve(call.handle)
        method = call.method
        if method == "put_down":
            self._put_down()
        elif method in ("clean", "fill_up"):
            self._wash(inst)
        elif method == "toast":
            self._toast(inst)
        elif method == "cook":
            self._cook(inst)
        elif method == "empty":
            self._empty(inst)
        elif method == "pickup_and_place":
            arg = self._resolve(call.arg)
            self._pickup_and_place(inst, arg)

    def _find_appliance(self, *categories: str,
                        required: bool = True) -> ObjectInstance | None:
        for category in categories:
            hits = self.session.memory.find(category)
            if hits:
                return hits[0]
        for category in categories:
            found = self.search_for_object(category)
            if found is not None:
                return found
        if required:
            raise StatementFailure(
                f"could not find a {' or '.join(categories)} anywhere")
        return None

    def _ensure_holding(self, inst: ObjectInstance) -> None:
        if self.held is not None and self.held.instance_id == inst.instance_id:
            return
        if self.held is not None:
            self._put_down()
        self._do_primitive("pickup", inst)

    def _open_receptacle(self, inst: ObjectInstance) -> bool:
        """Can the held object be set down here without opening anything?"""
        prof = AFFORDANCES.get(inst.label)
        if prof is None or not prof.receptacle:
            return False
        if prof.openable and self._estimate(inst).open is not True:
            return False
        return True

    def _put_down(self, exclude: ObjectInstance | None = None) -> None:
        if self.held is None:
            return
        memory = self.session.memory
        pose = self.session.pose
        here = np.array([pose.x, 0.0, pose.z])
        skip = {self.held.instance_id}
        if exclude is not None:
            skip.add(exclude.instance_id)
        options = [
            inst for inst in memory.instances
            if inst.instance_id not in skip and self._open_receptacle(inst)
        ]
        if not options:
            found = self.search_for_object("CounterTop")
            if found is None:
                raise StatementFailure(
                    "no receptacle available to put the held object down")
            options = [found]
        options.sort(key=lambda i: (
            float(np.linalg.norm((i.centroid - here)[[0, 2]])),
            i.instance_id))
        held = self.held
        self._do_primitive("place", held, options[0])

    def _wash(self, inst: ObjectInstance) -> None:
        self._ensure_holding(inst)
        basin = self._find_appliance(*_BASIN_CATEGORIES)
        faucet = self._find_appliance("Faucet")
        self._do_primitive("place", inst, basin)
        self._do_primitive("toggle_on", faucet)
        self._do_primitive("toggle_off", faucet)
        self._do_primitive("pickup", inst)
        profile = AFFORDANCES.get(inst.label)
        if profile is not None and profile.fillable:
            self._estimate(inst).filled = True

    def _toast(self, inst: ObjectInstance) -> None:
        self._ensure_holding(inst)
        toaster = self._find_appliance("Toaster")
        self._do_primitive("place", inst, toaster)
        self._do_primitive("toggle_on", toaster)
        self._do_primitive("toggle_off", toaster)
        self._do_primitive("pickup", inst)

    def _cook(self, inst: ObjectInstance) -> None:
        self._ensure_holding(inst)
        microwave = self._find_appliance("Microwave", required=False)
        if microwave is not None:
            if self._estimate(microwave).open is not True:
                self._do_primitive("open", microwave)
            self._do_primitive("place", inst, microwave)
            self._do_primitive("close", microwave)
            self._do_primitive("toggle_on", microwave)
            self._do_primitive("toggle_off", microwave)
            self._do_primitive("open", microwave)
            self._do_primitive("pickup", inst)
            self._do_primitive("close", microwave)
            return
        vessel = self._find_appliance("Pot", "Pan")
        self._do_primitive("place", inst, vessel)
        burner = self._find_appliance("StoveBurner", "StoveKnob")
        self._do_primitive("toggle_on", burner)
        self._do_primitive("toggle_off", burner)
        self._do_primitive("pickup", inst)

    def _empty(self, inst: ObjectInstance) -> None:
        if self.held is not None:
            self._put_down(exclude=inst)
        memory = self.session.memory
        for _ in range(4):
            anchor = inst.centroid
            contents = [
                other for other in memory.instances
                if other.instance_id != inst.instance_id
                and AFFORDANCES.get(other.label) is not None
                and AFFORDANCES[other.label].pickupable
                and float(np.linalg.norm((other.centroid - anchor)[[0, 2]]))
                <= 0.45
            ]
            if not contents:
                return
            contents.sort(key=lambda i: i.instance_id)
            self._do_primitive("pickup", contents[0])
            self._put_down(exclude=inst)

    def _pickup_and_place(self, inst: ObjectInstance,
                          arg: ObjectInstance) -> None:
        self._ensure_holding(inst)
        self._do_primitive("place", inst, arg)
