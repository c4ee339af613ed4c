// Copyright 2026 The Privscope Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

package archive

import (
	"context"

	"cloud.google.com/go/storage"
)

func Count(ctx context.Context) (int, error) {
	client, err := storage.NewClient(ctx)
	if err != nil {
		return 0, err
	}
	it := client.Bucket("archive").Objects(ctx, nil)
	n := 0
	for {
		_, err := it.Next()
		if err != nil {
			break
		}
		n++
	}
	return n, nil
}
