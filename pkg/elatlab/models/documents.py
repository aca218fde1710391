from typing import List, Optional

from pydantic import BaseModel, Extra, conint, validator


class ELatticeDocument(BaseModel):
    """On-disk form of an ε-lattice: 0-based indices into a carrier of `size` elements."""

    size: conint(ge=1)
    eps: List[conint(ge=0)]
    meet: List[List[conint(ge=0)]]
    join: List[List[conint(ge=0)]]
    labels: Optional[List[str]] = None

    @validator('eps')
    def validate_eps(cls, v, values):
        size = values.get('size')
        if size is not None:
            if len(v) != size:
                raise ValueError(f'eps must have {size} entries, got {len(v)}')
            for i, x in enumerate(v):
                if x >= size:
                    raise ValueError(f'eps[{i}] = {x} is out of range')
        return v

    @validator('meet', 'join')
    def validate_table(cls, v, values, field):
        size = values.get('size')
        if size is None:
            return v
        if len(v) != size:
            raise ValueError(f'{field.name} must have {size} rows, got {len(v)}')
        for i, row in enumerate(v):
            if len(row) != size:
                raise ValueError(f'{field.name}[{i}] must have {size} entries, got {len(row)}')
            for j, x in enumerate(row):
                if x >= size:
                    raise ValueError(f'{field.name}[{i}][{j}] = {x} is out of range')
        return v

    @validator('labels')
    def validate_labels(cls, v, values):
        size = values.get('size')
        if v is not None and size is not None and len(v) != size:
            raise ValueError(f'labels must have {size} entries, got {len(v)}')
        return v

    class Config:
        extra = Extra.forbid
