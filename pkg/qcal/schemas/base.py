from pydantic import BaseModel, ConfigDict

class QModel(BaseModel):
    model_config = ConfigDict(
        frozen=True,
        populate_by_name=True,
        from_attributes=True,
    )
