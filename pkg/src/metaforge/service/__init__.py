"""HTTP service wiring: app factory, registry, and instance store."""

from metaforge.service.app import STATUS_BY_CODE, create_app
from metaforge.service.registry import RegistryEntry, TemplateRegistry
from metaforge.service.store import InstanceStore, StoredInstance, new_instance_id

__all__ = ["STATUS_BY_CODE", "create_app", "RegistryEntry", "TemplateRegistry",
           "InstanceStore", "StoredInstance", "new_instance_id"]
