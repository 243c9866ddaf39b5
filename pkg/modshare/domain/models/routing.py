# modshare/domain/models/routing.py
from typing import Dict, List

from pydantic import BaseModel


class Route(BaseModel):
    request_id: str
    # modality -> device
    encoder_route: Dict[str, str]
    head_device: str


class EncoderPath(BaseModel):
    modality: str
    function_key: str
    device_id: str
    input_comm: float
    comp: float
    output_comm: float
    path_total: float


class LatencyBreakdown(BaseModel):
    request_id: str
    encoders: List[EncoderPath]
    t_enc: float
    t_head: float
    t_total: float
