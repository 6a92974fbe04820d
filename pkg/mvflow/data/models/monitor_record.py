#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Monitor Record Model

One time slice of the scalars tracked along a flow run.
"""

from dataclasses import dataclass, field, fields

# Scalar columns in trajectory order; V_0..V_{n+1} follow them
SCALAR_COLUMNS = (
    'step', 't', 'dt', 'preserved_volume', 'min_q1', 'min_q2', 'f_max',
    'pinch_ratio', 'speed_min', 'speed_max', 'phi_max', 'phi_bar',
    'rho_minus', 'rho_plus', 'radius_ratio', 'radius_bound', 'z_max', 'min_f_integral',
)


@dataclass
class MonitorRecord:
    """
    Monitor record model class.

    Attributes:
        step (int): Step counter
        t (float): Time
        dt (float): Last step size, 0 at the initial record
        preserved_volume (float): The preserved mixed volume V_{n-m}
        volumes (list): V_k for k = 0..n+1, V_{n+1} being the enclosed volume
        min_q1 (float): min K/H^n
        min_q2 (float): min K/F^n
        f_max (float): max 1/n^n - K/H^n
        pinch_ratio (float): max lam_n/lam_1
        speed_min (float): Smallest normal speed
        speed_max (float): Largest normal speed
        phi_max (float): Largest Phi
        phi_bar (float): Global term
        rho_minus (float): Inner radius bound about the Steiner point
        rho_plus (float): Outer radius bound about the Steiner point
        radius_ratio (float): rho_plus / rho_minus
        radius_bound (float): ((n+2)/sqrt(2)) * pinch_ratio
        z_max (float): max Phi / (S - rho_minus/4)
        min_f_integral (float): Running integral of min F dt
    """
    step: int
    t: float
    dt: float
    preserved_volume: float
    min_q1: float
    min_q2: float
    f_max: float
    pinch_ratio: float
    speed_min: float
    speed_max: float
    phi_max: float
    phi_bar: float
    rho_minus: float
    rho_plus: float
    radius_ratio: float
    radius_bound: float
    z_max: float
    min_f_integral: float = 0.0
    volumes: list = field(default_factory=list)

    @property
    def min_q(self):
        return {'q1': self.min_q1, 'q2': self.min_q2}

    def to_row(self):
        """Flat CSV row with volume columns V_0..V_{n+1}."""
        row = {name: getattr(self, name) for name in SCALAR_COLUMNS}
        for k, value in enumerate(self.volumes):
            row[f"V_{k}"] = value
        return row

    @classmethod
    def from_row(cls, row):
        """
        Create a record from a CSV row.

        Args:
            row (dict): Column name to value (strings or numbers)

        Returns:
            MonitorRecord: Record instance
        """
        values = {}
        for f in fields(cls):
            if f.name == 'volumes' or f.name not in row:
                continue
            values[f.name] = int(float(row[f.name])) if f.name == 'step' else float(row[f.name])
        k = 0
        volumes = []
        while f"V_{k}" in row:
            volumes.append(float(row[f"V_{k}"]))
            k += 1
        return cls(volumes=volumes, **values)

    def to_dict(self):
        data = self.to_row()
        data['volumes'] = list(self.volumes)
        return data


def columns_for(n):
    """Trajectory CSV header for dimension n."""
    return list(SCALAR_COLUMNS) + [f"V_{k}" for k in range(n + 2)]
