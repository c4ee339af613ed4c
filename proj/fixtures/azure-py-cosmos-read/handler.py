# Copyright 2026 The Privscope Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import os

from azure.cosmos import CosmosClient

client = CosmosClient.from_connection_string(os.environ["COSMOS_CONNECTION"])


def main(req):
    carts = client.get_database_client("shop").get_container_client("carts")
    cart_id = req.route_params["id"]
    return carts.read_item(item=cart_id, partition_key=cart_id)
