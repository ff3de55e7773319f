"""Instance files, generators and the ``qorbifold`` command line."""

from qorbifold.workbench.instance import (
    Instance,
    generate_sphere_instance,
    generate_torus_instance,
    load_instance,
    save_instance,
    validate,
    validation_report,
)

__all__ = [
    "Instance",
    "generate_sphere_instance",
    "generate_torus_instance",
    "load_instance",
    "save_instance",
    "validate",
    "validation_report",
]
