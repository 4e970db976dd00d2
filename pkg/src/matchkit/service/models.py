"""Request and response bodies for the HTTP endpoints.

Field names mirror the handler keyword arguments exactly, so a validated
request dumps straight into dispatch()."""

from __future__ import annotations

from pydantic import BaseModel, Field


class InstanceRequest(BaseModel):
    instance: str


class ConditionsRequest(BaseModel):
    instance: str
    part: int | None = Field(default=None, ge=1)


class WitnessRequest(BaseModel):
    instance: str
    min_progression_length: int = Field(default=2, ge=2)


class ScanPropertyRequest(BaseModel):
    group: str
    max_size: int = Field(default=3, ge=1)


class LinearMatchRequest(BaseModel):
    instance: str
    exhaustive: bool = True
    budget: int | None = Field(default=None, ge=0)
    seed: int = 0


class Conjecture1Request(BaseModel):
    field: str
    dims: int = Field(default=2, ge=1)
    exhaustive: bool = True
    budget: int | None = Field(default=None, ge=0)
    seed: int = 0
    time_limit: float | None = Field(default=None, gt=0)


class Conjecture2Request(BaseModel):
    field: str
    n: int = Field(default=2, ge=1)
    exhaustive: bool = True
    budget: int | None = Field(default=None, ge=0)
    seed: int = 0
    time_limit: float | None = Field(default=None, gt=0)


class ChowlaMaxRequest(BaseModel):
    field: str
    budget: int | None = Field(default=None, ge=0)
    seed: int = 0
    time_limit: float | None = Field(default=None, gt=0)


class SearchUnmatchableRequest(BaseModel):
    domain: str
    max_size: int = Field(default=3, ge=1)
    dim: int = Field(default=2, ge=1)
    exhaustive: bool = True
    budget: int | None = Field(default=None, ge=0)
    seed: int = 0
    time_limit: float | None = Field(default=None, gt=0)


class CommandResponse(BaseModel):
    exit_code: int
    report: dict
