"""Turn plans into operations data and merge it with the source model."""

from __future__ import annotations

from .errors import (
    CostMismatch,
    DanglingReference,
    PlanError,
    UnknownActionName,
    UnknownObjectId,
)
from .model import ProductionModel
from .model_io import IntegratedModel, Operation, OperationsRecord
from .pddl import Plan, PlanStep
from .transform import TransformReport


def plan_to_operations(
    plan: Plan, report: TransformReport, goal_id: str
) -> OperationsRecord:
    """Each step becomes an operation: segment id plus spec-to-element
    bindings; cost is the segment duration in seconds."""
    operations = []
    total = 0
    for index, step in enumerate(plan.steps):
        segment_id = report.segment_by_action.get(step.action.lower())
        if segment_id is None:
            raise UnknownActionName(
                f"step {index}: {step.action!r} matches no process segment"
            )
        spec_ids = report.spec_ids_by_segment[segment_id]
        if len(step.args) != len(spec_ids):
            raise PlanError(
                f"step {index}: {segment_id!r} takes {len(spec_ids)} arguments, "
                f"got {len(step.args)}"
            )
        bindings = []
        for spec_id, arg in zip(spec_ids, step.args):
            element = report.element_by_object.get(arg.lower())
            if element is None:
                raise UnknownObjectId(
                    f"step {index}: {arg!r} matches no model element"
                )
            bindings.append((spec_id, element))
        cost = report.cost_by_segment[segment_id]
        total += cost
        operations.append(
            Operation(
                sequence_index=index,
                segment_id=segment_id,
                bindings=tuple(bindings),
                cost=cost,
            )
        )
    if plan.cost is not None and plan.cost != total:
        raise CostMismatch(
            f"plan cost {plan.cost} disagrees with summed segment durations {total}"
        )
    return OperationsRecord(
        goal_id=goal_id, solvable=True, operations=tuple(operations), total_cost=total
    )


def unsolvable_record(goal_id: str) -> OperationsRecord:
    return OperationsRecord(goal_id=goal_id, solvable=False)


def operations_to_plan(record: OperationsRecord, report: TransformReport) -> Plan:
    """Inverse of plan_to_operations, for round-trips and re-validation."""
    steps = []
    for op in record.operations:
        args = []
        for _, element in op.bindings:
            name = report.object_by_element.get(element)
            if name is None:
                raise UnknownObjectId(f"{element!r} matches no PDDL object")
            args.append(name.lower())
        steps.append(PlanStep(op.segment_id.lower(), tuple(args)))
    return Plan(steps=tuple(steps), cost=record.total_cost)


def merge(
    model: ProductionModel, records: list[OperationsRecord] | tuple[OperationsRecord, ...]
) -> IntegratedModel:
    """Attach operations records to the model they were planned for."""
    for record in records:
        for op in record.operations:
            if op.segment_id not in model.segments_by_id:
                raise DanglingReference(
                    f"operations for {record.goal_id!r} use unknown segment "
                    f"{op.segment_id!r}"
                )
            for spec_id, element in op.bindings:
                if (
                    element not in model.equipment_by_id
                    and element not in model.lots_by_id
                    and not _is_property(model, element)
                ):
                    raise DanglingReference(
                        f"operations for {record.goal_id!r} bind {spec_id!r} to "
                        f"unknown element {element!r}"
                    )
    return IntegratedModel(model=model, operations_definitions=tuple(records))


def _is_property(model: ProductionModel, element: str) -> bool:
    return any(p.id == element for e in model.equipment for p in e.properties)
