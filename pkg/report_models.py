"""
Pydantic models for the JSON documents written by the CLI
"""
from pydantic import BaseModel
from typing import Dict, List, Optional, Union


class FamilyDescriptor(BaseModel):
    name: str
    kind: str
    params: Dict[str, str] = {}
    sigma: List[str]
    tau: List[str]
    support: str

    class Config:
        json_schema_extra = {
            "example": {
                "name": "kravchuk",
                "kind": "discrete",
                "params": {"p": "1/2", "N": "4/1"},
                "sigma": ["0/1", "1/1", "0/1"],
                "tau": ["4/1", "-2/1"],
                "support": "{0,...,4}",
            }
        }


class PolySeqExport(BaseModel):
    family: FamilyDescriptor
    n_max: int
    route: str = "recurrence"
    coeffs: List[List[str]]


class CheckResult(BaseModel):
    name: str
    passed: bool
    max_error: Optional[float] = None
    tolerance: Optional[float] = None
    first_failure: Optional[str] = None
    detail: Dict[str, str] = {}


class CertificateCheck(BaseModel):
    name: str
    status: str  # "pass", "fail", "float", "reported"
    mode: str = "exact"
    first_failure: Optional[str] = None
    max_error: Optional[float] = None


class CertificateReport(BaseModel):
    family: str
    params: Dict[str, str] = {}
    n_max: int
    exact: bool
    checks: List[CertificateCheck] = []

    @property
    def passed(self) -> bool:
        return all(check.status != "fail" for check in self.checks)

    def first_failure(self) -> Optional[CertificateCheck]:
        return next((check for check in self.checks if check.status == "fail"), None)


class DriftReport(BaseModel):
    family: str
    params: Dict[str, str] = {}
    n_max: int
    points: int
    max_relative_drift: float
    worst_index: Optional[int] = None
    worst_point: Optional[float] = None
    tolerance: float
    passed: bool


class MatrixExport(BaseModel):
    family: str
    operator: str
    dim: int
    triplets: List[List[float]]


class ClosureRelation(BaseModel):
    relation: str
    printed_constant: float
    measured_constant: float
    measured_residual: float
    printed_residual: float
    closes: bool
    matches_printed: bool


class ClosureReport(BaseModel):
    family: str
    params: Dict[str, str] = {}
    dim: int
    interior: int
    relations: List[ClosureRelation]

    @property
    def closes(self) -> bool:
        return all(relation.closes for relation in self.relations)


class LimitRow(BaseModel):
    schedule_param: float
    n: int
    sup_error: float
    rms_error: float
    operator_residual: float
    fitted_order_so_far: Optional[float] = None


class LimitReport(BaseModel):
    which: str
    n: int
    variant: str
    rows: List[LimitRow]
    fitted_order: Optional[float] = None
    monotone: bool
    exact: bool = False
    scaling: Dict[str, str] = {}


class CheckSuiteReport(BaseModel):
    suite: str
    family: Optional[str] = None
    passed: bool
    tolerances: Dict[str, float] = {}
    default_tolerances: Dict[str, float] = {}
    results: List[CheckResult] = []
    certificates: List[CertificateReport] = []
    closures: List[ClosureReport] = []
    matrices: List[MatrixExport] = []


class TableExport(BaseModel):
    kind: str
    family: Optional[FamilyDescriptor] = None
    columns: List[str]
    rows: List[List[Union[int, float, str]]]
    sequence: Optional[PolySeqExport] = None
