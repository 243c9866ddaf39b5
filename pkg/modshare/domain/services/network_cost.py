# modshare/domain/services/network_cost.py
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from modshare.domain.exceptions.exception import MissingLinkException
from modshare.domain.models.scenario import ComputeProfile, DeviceSpec, ModuleSpec, NetworkProfile


class TransferQuery(BaseModel):
    model_config = ConfigDict(populate_by_name=True, frozen=True)

    src: str = Field(alias="from")
    dst: str = Field(alias="to")
    size: float = Field(default=0.0, ge=0, allow_inf_nan=False)


def comm_time(q: TransferQuery, net: NetworkProfile) -> float:
    return transfer_time(net, q.src, q.dst, q.size)


def transfer_time(net: NetworkProfile, src: str, dst: str, size: float) -> float:
    """latency + size / bandwidth; zero on the same device."""
    if src == dst:
        return 0.0
    link = net.link(src, dst)
    if link is None:
        raise MissingLinkException(src, dst)
    return link.latency + size / link.bandwidth


def comp_time(m: ModuleSpec, n: DeviceSpec, profile: ComputeProfile) -> Optional[float]:
    """None when the device cannot run the module."""
    return profile.comp_time(m.function_key, n.device_id)
