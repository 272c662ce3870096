"""
Input validation functions for scenario files
"""
from models import (
    ClampPolicy,
    ClusterModel,
    ControllerConfig,
    IterationSchedule,
    LatencyKind,
    LatencyModel,
    RestartCostModel,
    ScenarioConfig,
    ScheduleKind,
    Scheme,
    TargetRange,
)
from elastic.workload import profile_from_preset

_TRUE = {'true', 'yes', 'on', '1'}
_FALSE = {'false', 'no', 'off', '0'}


def validate_int(value_str, field, minimum=None):
    """
    Validate and convert an integer field

    Args:
        value_str: The raw string from the scenario file
        field: Field path used in the error message
        minimum: Smallest accepted value, if any

    Returns:
        tuple: (is_valid, int_or_error_message)
    """
    try:
        value = int(value_str)
    except (TypeError, ValueError):
        return False, f"{field}: expected an integer, got {value_str!r}"

    if minimum is not None and value < minimum:
        return False, f"{field}: must be >= {minimum}, got {value}"
    return True, value


def validate_float(value_str, field, minimum=None, maximum=None):
    """
    Validate and convert a real-valued field

    Returns:
        tuple: (is_valid, float_or_error_message)
    """
    try:
        value = float(value_str)
    except (TypeError, ValueError):
        return False, f"{field}: expected a number, got {value_str!r}"

    if minimum is not None and value < minimum:
        return False, f"{field}: must be >= {minimum}, got {value}"
    if maximum is not None and value > maximum:
        return False, f"{field}: must be <= {maximum}, got {value}"
    return True, value


def validate_bool(value_str, field):
    normalized = str(value_str).strip().lower()
    if normalized in _TRUE:
        return True, True
    if normalized in _FALSE:
        return True, False
    return False, f"{field}: expected true or false, got {value_str!r}"


def validate_choice(value_str, field, enum_type):
    try:
        return True, enum_type(str(value_str).strip().lower())
    except ValueError:
        choices = ', '.join(member.value for member in enum_type)
        return False, f"{field}: expected one of {choices}, got {value_str!r}"


class _Fields:
    """Collects converted values of one section and the first error met."""

    def __init__(self, section_name, section):
        self.section_name = section_name
        self.section = section
        self.values = {}
        self.error = None

    def take(self, key, validator, required=True, default=None, **kwargs):
        if self.error:
            return None
        if key not in self.section:
            if required:
                self.error = f"{self.section_name}.{key}: is required"
            return default
        is_valid, result = validator(self.section[key], f"{self.section_name}.{key}", **kwargs)
        if not is_valid:
            self.error = result
            return None
        return result


def _build(section_name, factory, **kwargs):
    try:
        return True, factory(**kwargs)
    except ValueError as e:
        return False, f"{section_name}: {e}"


def validate_controller_data(section):
    """
    Validate the [controller] section

    Returns:
        tuple: (is_valid, ControllerConfig_or_error_message)
    """
    f = _Fields('controller', section)
    ce_min = f.take('ce_min', validate_float, minimum=0.0, maximum=1.0)
    ce_max = f.take('ce_max', validate_float, minimum=0.0, maximum=1.0)
    period = f.take('averaging_period_steps', validate_int, minimum=1)
    rate = f.take('rate_of_change', validate_float)
    min_cores = f.take('min_cores', validate_int, minimum=1)
    max_cores = f.take('max_cores', validate_int, minimum=1)
    initial = f.take('initial_cores', validate_int, minimum=1)
    starting = f.take('starting_time_step', validate_int, required=False, default=0, minimum=0)
    total = f.take('total_steps', validate_int, minimum=0)
    snap = f.take('snap_to_nodes', validate_bool, required=False, default=False)
    granularity = f.take('node_granularity_cores', validate_int, required=False, default=1, minimum=1)
    windows = f.take('convergence_windows', validate_int, required=False, default=3, minimum=1)
    if f.error:
        return False, f.error

    is_valid, target_range = _build('controller', TargetRange, ce_min=ce_min, ce_max=ce_max)
    if not is_valid:
        return False, target_range

    is_valid, clamp = _build('controller', ClampPolicy, rate_of_change=rate, min_cores=min_cores,
                             max_cores=max_cores, node_granularity=granularity, snap_to_nodes=snap)
    if not is_valid:
        return False, clamp

    return _build('controller', ControllerConfig, target_range=target_range, averaging_period=period,
                  clamp=clamp, initial_cores=initial, starting_step=starting, total_steps=total,
                  convergence_windows=windows)


def validate_iteration_schedule(section):
    """
    Validate the iteration schedule keys of the [workload] section

    Returns:
        tuple: (is_valid, IterationSchedule_or_error_message)
    """
    f = _Fields('workload', section)
    kind = f.take('iterations', validate_choice, enum_type=ScheduleKind)
    if f.error:
        return False, f.error

    if kind is ScheduleKind.CONSTANT:
        constant = f.take('iterations_constant', validate_int, minimum=1)
        if f.error:
            return False, f.error
        return _build('workload', IterationSchedule, kind=kind, constant=constant)

    plateau = f.take('ramp_plateau_iterations', validate_int, required=False, default=20, minimum=1)
    jump = f.take('ramp_jump_step', validate_int, required=False, default=50, minimum=0)
    offset = f.take('ramp_offset_iterations', validate_int, required=False, default=10)
    if f.error:
        return False, f.error
    return _build('workload', IterationSchedule, kind=kind, plateau=plateau, jump_step=jump, offset=offset)


def validate_workload_data(section, seed_override=None):
    """
    Validate the [workload] section on top of its calibration preset

    Returns:
        tuple: (is_valid, WorkloadProfile_or_error_message)
    """
    f = _Fields('workload', section)
    scheme = f.take('preset', validate_choice, enum_type=Scheme)
    overrides = {}
    for key, field, validator, kwargs in (
            ('total_work_core_seconds', 'total_work', validate_float, {'minimum': 0.0}),
            ('comm_per_iteration_seconds', 'comm_base', validate_float, {'minimum': 0.0}),
            ('comm_log_slope', 'comm_log_slope', validate_float, {}),
            ('reference_cores', 'reference_cores', validate_int, {'minimum': 1}),
            ('imbalance_amplitude', 'imbalance_amplitude', validate_float, {'minimum': 0.0, 'maximum': 0.5}),
            ('noise_amplitude', 'noise_amplitude', validate_float, {'minimum': 0.0, 'maximum': 0.5}),
            ('seed', 'rng_seed', validate_int, {'minimum': 0})):
        value = f.take(key, validator, required=False, **kwargs)
        if value is not None:
            overrides[field] = value
    restart_fixed = f.take('restart_fixed_seconds', validate_float, required=False, minimum=0.0)
    restart_size = f.take('restart_size_core_seconds', validate_float, required=False, minimum=0.0)
    if f.error:
        return False, f.error

    if restart_fixed is not None or restart_size is not None:
        is_valid, preset_profile = _build('workload', profile_from_preset, scheme=scheme)
        if not is_valid:
            return False, preset_profile
        overrides['restart'] = RestartCostModel(
            restart_fixed if restart_fixed is not None else preset_profile.restart.fixed_seconds,
            restart_size if restart_size is not None else preset_profile.restart.size_core_seconds,
        )

    if 'iterations' in section:
        is_valid, schedule = validate_iteration_schedule(section)
        if not is_valid:
            return False, schedule
        overrides['iteration_schedule'] = schedule

    if seed_override is not None:
        overrides['rng_seed'] = seed_override

    return _build('workload', profile_from_preset, scheme=scheme, **overrides)


def validate_latency(section):
    """
    Validate the grow-latency keys of the [cluster] section

    Returns:
        tuple: (is_valid, LatencyModel_or_error_message)
    """
    f = _Fields('cluster', section)
    if 'grow_latency_seconds' in section:
        seconds = f.take('grow_latency_seconds', validate_float, minimum=0.0)
        return (False, f.error) if f.error else _build('cluster', LatencyModel, kind=LatencyKind.FIXED, value=seconds)

    if 'grow_latency_min_seconds' in section or 'grow_latency_max_seconds' in section:
        low = f.take('grow_latency_min_seconds', validate_float, minimum=0.0)
        high = f.take('grow_latency_max_seconds', validate_float, minimum=0.0)
        if f.error:
            return False, f.error
        return _build('cluster', LatencyModel, kind=LatencyKind.UNIFORM, value=low, upper=high)

    steps = f.take('grow_latency_steps', validate_float, required=False, default=2.0, minimum=0.0)
    return (False, f.error) if f.error else _build('cluster', LatencyModel, kind=LatencyKind.STEPS, value=steps)


def validate_cluster_data(section, seed_override=None):
    """
    Validate the [cluster] section

    Returns:
        tuple: (is_valid, ClusterModel_or_error_message)
    """
    f = _Fields('cluster', section)
    cores_per_node = f.take('cores_per_node', validate_int, required=False, default=15, minimum=1)
    total_nodes = f.take('total_nodes', validate_int, required=False, default=16, minimum=1)
    contention = f.take('contention_probability', validate_float, required=False, default=0.0,
                        minimum=0.0, maximum=1.0)
    timeout = f.take('grant_timeout_seconds', validate_float, required=False, minimum=0.0)
    seed = f.take('seed', validate_int, required=False, default=0, minimum=0)
    if f.error:
        return False, f.error

    is_valid, latency = validate_latency(section)
    if not is_valid:
        return False, latency

    return _build('cluster', ClusterModel, cores_per_node=cores_per_node, total_nodes=total_nodes,
                  grow_latency=latency, contention_probability=contention, grant_timeout=timeout,
                  rng_seed=seed if seed_override is None else seed_override)


def validate_scenario_data(sections, default_name='scenario', seed_override=None):
    """
    Validate all scenario sections at once

    Args:
        sections: Mapping of section name to a mapping of raw key/value strings
        default_name: Scenario name used when [scenario] gives none
        seed_override: Replaces the workload and cluster seeds when given

    Returns:
        tuple: (is_valid, ScenarioConfig_or_error_message)
    """
    for required in ('controller', 'workload'):
        if required not in sections:
            return False, f"{required}: section is missing"

    header = sections.get('scenario', {})
    name = header.get('name', default_name).strip()
    if not name:
        return False, "scenario.name: must not be empty"
    if len(name) > 60:
        return False, "scenario.name: must be 60 characters or less"

    is_valid, controller = validate_controller_data(sections['controller'])
    if not is_valid:
        return False, controller

    is_valid, workload = validate_workload_data(sections['workload'], seed_override)
    if not is_valid:
        return False, workload

    is_valid, cluster = validate_cluster_data(sections.get('cluster', {}), seed_override)
    if not is_valid:
        return False, cluster

    return _build('scenario', ScenarioConfig, name=name, controller=controller, workload=workload,
                  cluster=cluster, description=header.get('description', '').strip())
