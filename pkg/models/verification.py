from typing import List, Optional

from pydantic import BaseModel, Field


class CheckResult(BaseModel):
    name: str = Field(description="Oracle check name")
    cases: int = Field(description="Number of cases executed")
    failures: int = Field(description="Number of failing cases")
    max_error: Optional[float] = Field(default=None, description="Largest observed error, when meaningful")
    detail: Optional[str] = Field(default=None, description="First failure, if any")

    @property
    def passed(self) -> bool:
        return self.failures == 0


class VerificationReport(BaseModel):
    status: str = Field(description="'pass' or 'fail'")
    max_n: int = Field(description="Largest network size enumerated")
    max_k: int = Field(description="Largest number of networks enumerated")
    max_t: int = Field(description="Largest iteration count enumerated")
    seed: int = Field(description="Seed for random cases")
    checks: List[CheckResult] = Field(default_factory=list)

    # Pydantic v2 style
    model_config = {
        "json_schema_extra": {
            "example": {
                "status": "pass",
                "max_n": 4,
                "max_k": 3,
                "max_t": 4,
                "seed": 0,
                "checks": [{"name": "factor_equivalence", "cases": 200, "failures": 0, "max_error": 2.2e-16}],
            }
        }
    }

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)
