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

import azure.functions as func
from azure.storage.blob import BlobServiceClient

service = BlobServiceClient.from_connection_string(os.environ["AzureWebJobsStorage"])


def main(req: func.HttpRequest) -> func.HttpResponse:
    blob = service.get_blob_client("uploads", "report.pdf")
    blob.upload_blob(req.get_body(), overwrite=True)
    return func.HttpResponse(status_code=201)
